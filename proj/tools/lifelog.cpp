#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lifelog/api.hpp"
#include "lifelog/synthetic.hpp"
#include "lifelog/text.hpp"

using namespace lifelog;
using nlohmann::json;

namespace {

std::function<void()> g_stop;

// Thrown after a diagnostic has already been printed.
struct Reported {};

// Query strings start with '-' just like options. Real options never hold
// whitespace, so such tokens are swapped for placeholders before CLI11 sees
// them and swapped back afterwards.
class ShieldedArgs {
 public:
  ShieldedArgs(int argc, char** argv) {
    for (int i = 0; i < argc; ++i) {
      std::string a = argv[i];
      if (i > 0 && a.size() > 1 && a[0] == '-' && a.find_first_of(" \t") != std::string::npos) {
        args_.push_back(kMark + std::to_string(shielded_.size()));
        shielded_.push_back(std::move(a));
      } else {
        args_.push_back(std::move(a));
      }
    }
    for (auto& a : args_) ptrs_.push_back(a.data());
  }
  int argc() const { return static_cast<int>(ptrs_.size()); }
  char** argv() { return ptrs_.data(); }
  void restore(std::string& s) const {
    if (s.rfind(kMark, 0) == 0) s = shielded_.at(std::stoul(s.substr(kMark.size())));
  }

 private:
  inline static const std::string kMark = "\x01dsl";
  std::vector<std::string> args_, shielded_;
  std::vector<char*> ptrs_;
};

void on_signal(int) {
  if (g_stop) g_stop();
}

std::shared_ptr<const IndexSet> load_index(const ApiConfig& cfg) {
  if (cfg.corpus_path.empty()) throw std::invalid_argument("no corpus given (use --corpus or a config file)");
  IngestConfig ic;
  ic.clustering = cfg.clustering;
  auto corpus = std::make_shared<const Corpus>(ingest_corpus(cfg.corpus_path, ic));
  EngineConfig ec;
  ec.times = cfg.times;
  ec.coordinate_match_km = cfg.coordinate_match_km;
  return std::make_shared<const IndexSet>(build_indexes(corpus, ec));
}

void print_hits(const ResultPage& page, const Corpus& corpus) {
  for (const Hit& h : page.hits) {
    std::cout << h.id << '\t' << format_rfc3339(corpus[h.ordinal].timestamp) << '\t'
              << format_double(h.score);
    if (!h.matched.empty()) {
      std::cout << '\t';
      for (std::size_t i = 0; i < h.matched.size(); ++i) std::cout << (i ? "," : "") << h.matched[i];
    }
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifelog image retrieval: ingest, query and serve a lifelog corpus"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_path;
  double ingest_threshold = 0.95;
  std::int64_t ingest_gap = 120;
  auto* ingest = app.add_subcommand("ingest", "Validate a metadata file and print corpus statistics");
  ingest->add_option("file", ingest_path, "JSON-lines metadata")->required();
  ingest->add_option("--cluster-threshold", ingest_threshold, "Cosine threshold for clustering");
  ingest->add_option("--cluster-max-gap", ingest_gap, "Maximum gap in seconds inside a cluster");

  // gen
  SyntheticParams gp;
  std::string gen_out, gen_manifest, gen_start;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic corpus and its ground-truth manifest");
  gen->add_option("--seed", gp.seed, "RNG seed");
  gen->add_option("--days", gp.days, "Number of days")->check(CLI::PositiveNumber);
  gen->add_option("--images-per-day", gp.images_per_day, "Images per day")
      ->check(CLI::Range(1, kMaxImagesPerDay));
  gen->add_option("--out", gen_out, "Metadata output path")->required();
  gen->add_option("--manifest", gen_manifest, "Manifest output path");
  gen->add_option("--start-date", gen_start, "First day, yyyy/mm/dd");
  gen->add_option("--offset-minutes", gp.utc_offset_minutes, "UTC offset of every record")
      ->check(CLI::Range(-1439, 1439));
  gen->add_option("--feature-dim", gp.feature_dim, "Feature vector dimension")->check(CLI::Range(2, 4096));
  gen->add_flag("--story", gp.plant_story, "Plant the airport, taxi and meeting morning");

  // query
  std::string query_text, config_path, corpus_path;
  std::vector<std::string> then;
  std::optional<std::int64_t> max_span;
  bool any_day = false, as_json = false;
  std::optional<double> score;
  std::optional<std::uint32_t> limit;
  std::optional<bool> reduced;
  std::string sort;
  auto* query = app.add_subcommand("query", "Run a filter or temporal query");
  query->add_option("query", query_text, "Query in the keyword syntax")->required();
  query->add_option("--then", then, "Later temporal stage (repeatable)");
  query->add_option("--max-span", max_span, "Maximum seconds between consecutive stages")
      ->check(CLI::NonNegativeNumber);
  query->add_flag("--any-day", any_day, "Let temporal stages cross midnight");
  query->add_option("--score", score, "Global confidence threshold")->check(CLI::Range(0.0, 1.0));
  query->add_option("--limit", limit, "Maximum results")->check(CLI::PositiveNumber);
  query->add_option("--reduced", reduced, "Keep one image per cluster (true/false)");
  query->add_option("--sort", sort, "date, confidence or objects");
  query->add_flag("--json", as_json, "Print the HTTP response body instead of lines");
  query->add_option("--corpus", corpus_path, "Metadata file");
  query->add_option("--config", config_path, "Config file");

  // serve
  std::string serve_config, serve_corpus, serve_listen;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--config", serve_config, "Config file");
  serve->add_option("--corpus", serve_corpus, "Metadata file (overrides the config)");
  serve->add_option("--listen", serve_listen, "host:port (overrides the config)");

  // mock-submit-server
  std::string mock_host = "127.0.0.1";
  int mock_port = 8090;
  std::vector<std::string> mock_targets;
  auto* mock = app.add_subcommand("mock-submit-server", "Run a local stand-in for the answer judge");
  mock->add_option("--host", mock_host, "Bind address");
  mock->add_option("--port", mock_port, "Port, 0 for any")->check(CLI::Range(0, 65535));
  mock->add_option("--target", mock_targets, "Accepted record id (repeatable; none accepts all)");

  // submit
  std::string submit_id, submit_corpus, submit_url, submit_config;
  auto* sub = app.add_subcommand("submit", "Submit a record id as an answer");
  sub->add_option("id", submit_id, "Record id")->required();
  sub->add_option("--corpus", submit_corpus, "Metadata file");
  sub->add_option("--config", submit_config, "Config file");
  sub->add_option("--url", submit_url, "Submission endpoint (http)");

  ShieldedArgs args(argc, argv);
  try {
    app.parse(args.argc(), args.argv());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  args.restore(query_text);
  for (auto& t : then) args.restore(t);

  try {
    if (*ingest) {
      IngestConfig ic;
      ic.clustering = {ingest_threshold, ingest_gap};
      auto corpus = std::make_shared<const Corpus>(ingest_corpus(ingest_path, ic));
      IndexSet idx = build_indexes(corpus);
      std::size_t with_geo = idx.geo_ordinals().size(), with_feat = idx.feature_ordinals().size();
      std::size_t detections = 0;
      for (const auto& r : corpus->records()) detections += r.detections.size();
      std::cout << "records\t" << corpus->size() << "\n"
                << "days\t" << idx.day_index().size() << "\n"
                << "clusters\t" << idx.cluster_count() << "\n"
                << "terms\t" << idx.term_index().size() << "\n"
                << "detections\t" << detections << "\n"
                << "locations\t" << idx.location_index().size() << "\n"
                << "with_coordinates\t" << with_geo << "\n"
                << "with_features\t" << with_feat << "\n";
      if (!corpus->empty())
        std::cout << "first\t" << format_rfc3339((*corpus)[0].timestamp) << "\n"
                  << "last\t" << format_rfc3339((*corpus)[corpus->size() - 1].timestamp) << "\n";
      return 0;
    }

    if (*gen) {
      if (!gen_start.empty()) {
        auto d = parse_date(gen_start);
        if (!d) throw std::invalid_argument("--start-date must be a valid yyyy/mm/dd date");
        gp.start_date = *d;
      }
      SyntheticCorpus sc = generate_synthetic(gp);
      std::ofstream out(gen_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write '" + gen_out + "'");
      out << sc.metadata;
      if (!gen_manifest.empty()) {
        std::ofstream m(gen_manifest, std::ios::binary);
        if (!m) throw std::runtime_error("cannot write '" + gen_manifest + "'");
        m << sc.manifest.dump(2) << '\n';
      }
      std::cout << "wrote " << sc.manifest["record_count"].get<std::size_t>() << " records to " << gen_out
                << '\n';
      return 0;
    }

    if (*query) {
      ApiConfig cfg = config_path.empty() ? ApiConfig{} : load_config(config_path);
      if (!corpus_path.empty()) cfg.corpus_path = corpus_path;
      QueryOptions opts = cfg.defaults;
      if (score) opts.global_score = *score;
      if (limit) opts.limit = *limit;
      if (reduced) opts.reduced = *reduced;
      if (!sort.empty()) {
        auto s = parse_sort(to_lower(sort));
        if (!s) throw std::invalid_argument("--sort must be date, confidence or objects");
        opts.sort = *s;
      }

      auto parse_stage = [&](const std::string& text, std::size_t stage) {
        try {
          FilterQuery q = parse_query(text);
          q.options = opts;
          return q;
        } catch (const ParseError& e) {
          std::cerr << "error: stage " << stage + 1 << ": " << e.detail() << "\n  " << text << "\n  "
                    << std::string(e.position(), ' ') << "^\n";
          throw Reported{};
        }
      };
      std::vector<FilterQuery> stages;
      stages.push_back(parse_stage(query_text, 0));
      for (std::size_t i = 0; i < then.size(); ++i) stages.push_back(parse_stage(then[i], i + 1));

      auto idx = load_index(cfg);
      if (stages.size() == 1) {
        ResultPage page = evaluate(stages[0], *idx);
        if (as_json)
          std::cout << wire::result_page(stages[0], page, idx->corpus()).dump(2) << '\n';
        else {
          print_hits(page, idx->corpus());
          std::cerr << page.hits.size() << " of " << page.total_before_limit << " matches\n";
        }
      } else {
        TemporalQuery tq;
        tq.stages = std::move(stages);
        if (max_span) tq.max_span = std::chrono::seconds{*max_span};
        tq.same_day = !any_day;
        TemporalResult r = evaluate_temporal(tq, *idx);
        if (as_json)
          std::cout << wire::temporal_result(tq, r, idx->corpus()).dump(2) << '\n';
        else {
          for (const auto& m : r.matches) {
            for (std::size_t i = 0; i < m.ordinals.size(); ++i)
              std::cout << (i ? "\t" : "") << idx->corpus()[m.ordinals[i]].id;
            std::cout << '\n';
          }
          std::cerr << r.matches.size() << " of " << r.total_before_limit << " sequences\n";
        }
      }
      return 0;
    }

    if (*serve) {
      ApiConfig cfg = serve_config.empty() ? ApiConfig{} : load_config(serve_config);
      if (!serve_corpus.empty()) cfg.corpus_path = serve_corpus;
      if (!serve_listen.empty()) {
        ApiConfig l = parse_config("listen = " + serve_listen);
        cfg.host = l.host;
        cfg.port = l.port;
      }
      auto idx = load_index(cfg);
      Service service(idx, cfg);
      int port = service.bind(cfg.host, cfg.port);
      g_stop = [&service] { service.stop(); };
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving " << idx->corpus().size() << " records on http://" << cfg.host << ':' << port
                << std::endl;
      service.run();
      return 0;
    }

    if (*mock) {
      MockSubmissionServer server({mock_targets.begin(), mock_targets.end()});
      int port = server.bind(mock_host, mock_port);
      g_stop = [&server] { server.stop(); };
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "mock submission server on http://" << mock_host << ':' << port << "/submit" << std::endl;
      server.run();
      return 0;
    }

    if (*sub) {
      ApiConfig cfg = submit_config.empty() ? ApiConfig{} : load_config(submit_config);
      if (!submit_corpus.empty()) cfg.corpus_path = submit_corpus;
      if (!submit_url.empty()) cfg.submit_url = submit_url;
      auto idx = load_index(cfg);
      SubmissionReceipt r = submit(submit_id, *idx, cfg.submit_url);
      std::cout << wire::receipt(r).dump() << '\n';
      return r.outcome == SubmitOutcome::Accepted ? 0 : 3;
    }
  } catch (const Reported&) {
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
