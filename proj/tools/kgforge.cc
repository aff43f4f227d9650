// kgforge: command-line front end for the text-to-KG pipeline.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgforge/artifacts.h"
#include "kgforge/catalog.h"
#include "kgforge/config.h"
#include "kgforge/convert.h"
#include "kgforge/corpus.h"
#include "kgforge/error.h"
#include "kgforge/fs.h"
#include "kgforge/pipeline.h"
#include "kgforge/rdf.h"
#include "kgforge/text.h"

namespace stdfs = std::filesystem;
using namespace kgforge;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kConfig = 2;

config::RunConfig load(const std::string &path, const std::string &mode,
                       const std::string &target,
                       const std::vector<std::string> &sets) {
  config::RunConfig c = config::load_config(path);
  for (const auto &kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value: " + kv);
    c.set(kv.substr(0, eq), kv.substr(eq + 1), stdfs::current_path());
  }
  if (!mode.empty()) c.set("mode", mode);
  if (!target.empty()) c.set("target", target, stdfs::current_path());
  return c;
}

int cmd_run(const config::RunConfig &c) {
  auto docs = corpus::load_corpus(c.corpus);
  auto manifest = pipeline::run_pipeline(c, docs);
  for (const auto &d : manifest.documents) {
    std::cout << d.id << "  " << pipeline::to_string(d.status);
    if (d.status == pipeline::Status::kFailed) {
      std::cout << "  (" << d.failed_stage << ": " << d.error << ")";
    }
    std::cout << "\n";
  }
  const auto &k = manifest.counters;
  std::cout << "llm calls " << k.llm_calls << ", cache hits " << k.cache_hits
            << ", relations " << k.relations << ", skipped statements "
            << k.skipped_statements << ", dropped triples " << k.dropped_off_ontology
            << "\n";
  int code = manifest.count(pipeline::Status::kFailed) ? kPartial : kOk;
  if (c.gold && code == kOk) {
    auto report = pipeline::run_eval(c.run_dir, *c.gold, c.criterion, c.jaccard);
    std::cout << report.table();
  }
  return code;
}

int cmd_inspect(const stdfs::path &dir) {
  if (!stdfs::is_directory(dir)) {
    std::cerr << "not a directory: " << dir << "\n";
    return kPartial;
  }
  auto show = [&](const char *file, auto summary) {
    stdfs::path p = dir / file;
    std::cout << file << ": ";
    if (!stdfs::exists(p)) {
      std::cout << "missing\n";
      return;
    }
    try {
      summary(p);
    } catch (const std::exception &e) {
      std::cout << "unreadable (" << e.what() << ")\n";
    }
  };
  show("cqs.json", [](const stdfs::path &p) {
    auto j = artifacts::read_json(p);
    std::cout << j["questions"].size() << " questions\n";
    for (const auto &q : j["questions"]) {
      std::cout << "  CQ" << q["index"].get<int>() << ". " << q["text"].get<std::string>() << "\n";
    }
  });
  show("qa.json", [](const stdfs::path &p) {
    auto j = artifacts::read_json(p);
    std::size_t answered = 0;
    for (const auto &q : j["pairs"]) answered += q["answered"].get<bool>();
    std::cout << answered << "/" << j["pairs"].size() << " answered\n";
  });
  show("relations.json", [](const stdfs::path &p) {
    auto j = artifacts::read_json(p);
    std::cout << j["relations"].size() << " relations\n";
    for (const auto &r : j["relations"]) {
      std::cout << "  (" << r["name"].get<std::string>() << ", "
                << r["usage_comment"].get<std::string>() << ")\n";
    }
  });
  show("matches.json", [](const stdfs::path &p) {
    auto j = artifacts::read_json(p);
    std::cout << j["mode"].get<std::string>() << " mode\n";
    for (const auto &d : j["decisions"]) {
      std::cout << "  " << d["relation"]["name"].get<std::string>() << " -> ";
      if (d["candidate"].is_object()) {
        std::cout << d["candidate"]["pid"].get<std::string>() << " "
                  << d["candidate"]["pascal_label"].get<std::string>();
      }
      std::cout << " [" << d["outcome"].get<std::string>() << "]\n";
    }
  });
  show("ontology.ttl", [](const stdfs::path &p) {
    auto g = rdf::parse_turtle(fs::read_file(p));
    std::cout << g.size() << " triples\n";
  });
  show("kg.ttl", [](const stdfs::path &p) {
    std::string text = fs::read_file(p);
    auto g = rdf::parse_turtle(text);
    std::cout << g.size() << " triples\n" << text;
  });
  return kOk;
}

int cmd_match(const config::RunConfig &c, const std::string &relation) {
  auto colon = relation.find(':');
  if (colon == std::string::npos) throw ConfigError("--relation expects \"name: comment\"");
  ExtractedRelation r{text::trim(relation.substr(0, colon)),
                      text::trim(relation.substr(colon + 1)), "cli", relation};
  auto services = pipeline::make_services(c);
  matcher::MatcherContext ctx{services.catalog, services.index, *services.embedder,
                              *services.gateway,
                              {c.llm.model, c.llm.temperature, c.llm.max_output_tokens},
                              c.embed.text, services.aliases};
  auto d = matcher::match_relation(r, ctx, services.mode);
  auto set = matcher::build_final_property_set({d}, services.mode);
  std::cout << artifacts::matches_to_json("cli", services.mode.kind, {d}, set).dump(2)
            << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Text to knowledge graph pipeline"};
  app.require_subcommand(1);

  // catalog
  auto *cat = app.add_subcommand("catalog", "Wikidata property catalog");
  cat->require_subcommand(1);
  std::string endpoint = "https://query.wikidata.org/sparql", out_path, in_path;
  long timeout_ms = 120000;
  auto *fetch = cat->add_subcommand("fetch", "Fetch a property snapshot over SPARQL");
  fetch->add_option("--endpoint", endpoint, "SPARQL endpoint");
  fetch->add_option("--out", out_path, "Snapshot to write")->required();
  fetch->add_option("--timeout-ms", timeout_ms, "Request timeout");
  auto *filter = cat->add_subcommand("filter", "Keep whitelisted datatypes");
  filter->add_option("--in", in_path, "Input snapshot")->required();
  filter->add_option("--out", out_path, "Filtered snapshot")->required();

  // convert
  auto *conv = app.add_subcommand("convert", "Convert a dataset into corpus lines");
  std::string shape, text_path, triples_path, gold_out, id_prefix = "doc";
  conv->add_option("shape", shape, "edc | wikinre | webnlg | scierc")->required();
  conv->add_option("--input,--text", text_path, "Text lines or SciERC JSON lines")->required();
  conv->add_option("--triples", triples_path, "Triple list literals, one per line");
  conv->add_option("--out", out_path, "Corpus file to write")->required();
  conv->add_option("--gold", gold_out, "Gold file to write");
  conv->add_option("--id-prefix", id_prefix, "Document id prefix");

  // run / match share the config options
  std::string config_path, mode, target;
  std::vector<std::string> sets;
  auto *run = app.add_subcommand("run", "Run the pipeline over a corpus");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--mode", mode, "constrained | unconstrained");
  run->add_option("--target", target, "Target property list");
  run->add_option("--set", sets, "Override a config key (key=value)");

  auto *match = app.add_subcommand("match", "Match a single relation");
  std::string relation;
  match->add_option("--config", config_path, "Config file")->required();
  match->add_option("--relation", relation, "\"name: usage comment\"")->required();
  match->add_option("--mode", mode, "constrained | unconstrained");
  match->add_option("--target", target, "Target property list");
  match->add_option("--set", sets, "Override a config key (key=value)");

  // eval
  auto *ev = app.add_subcommand("eval", "Score a run against gold triples");
  std::string run_dir, gold_path, criterion = "partial";
  double jaccard = 0.5;
  ev->add_option("--run", run_dir, "Run directory")->required();
  ev->add_option("--gold", gold_path, "Gold file")->required();
  ev->add_option("--criterion", criterion, "exact | partial");
  ev->add_option("--jaccard", jaccard, "Partial token-overlap threshold");

  auto *inspect = app.add_subcommand("inspect", "Summarize one document's artifacts");
  std::string doc_dir;
  inspect->add_option("dir", doc_dir, "<run-dir>/<doc-id>")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*fetch) {
      catalog::FetchOptions o;
      o.timeout = std::chrono::milliseconds(timeout_ms);
      auto stats = catalog::fetch_catalog(endpoint, out_path, o);
      std::cout << stats.records << " properties written, " << stats.skipped
                << " skipped\n";
      return kOk;
    }
    if (*filter) {
      auto all = catalog::load_snapshot(in_path);
      auto kept = catalog::filter_catalog(all);
      catalog::write_snapshot(out_path, kept.entries());
      std::cout << kept.size() << " of " << all.size() << " properties kept\n";
      return kOk;
    }
    if (*conv) {
      std::vector<Document> docs;
      if (shape == "scierc") {
        docs = convert::from_scierc(text_path);
      } else if (shape == "edc" || shape == "wikinre" || shape == "webnlg") {
        stdfs::path tp = triples_path;
        docs = convert::from_edc(text_path, triples_path.empty() ? nullptr : &tp, id_prefix);
      } else {
        throw ConfigError("unknown dataset shape: " + shape);
      }
      convert::write_corpus(out_path, docs);
      if (!gold_out.empty()) convert::write_gold(gold_out, docs);
      std::cout << docs.size() << " documents written\n";
      return kOk;
    }
    if (*run) return cmd_run(load(config_path, mode, target, sets));
    if (*match) return cmd_match(load(config_path, mode, target, sets), relation);
    if (*ev) {
      eval::Criterion c;
      try {
        c = eval::criterion_from_string(criterion);
      } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
      }
      auto report = pipeline::run_eval(run_dir, gold_path, c, jaccard);
      std::cout << report.table();
      return kOk;
    }
    if (*inspect) return cmd_inspect(doc_dir);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPartial;
  }
  return kOk;
}
