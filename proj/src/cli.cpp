#include "wrdist/cli.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "text_util.hpp"
#include "wrdist/converter.hpp"
#include "wrdist/embeddings.hpp"
#include "wrdist/errors.hpp"
#include "wrdist/evaluation.hpp"
#include "wrdist/similarity.hpp"

namespace wrd::cli {

namespace {

struct CliConfig {
  std::string embeddings;
  std::string metric = "wrd";
  std::string converter = "none";
  std::string freq;
  std::string stopwords;
  std::string stopword_removal = "auto";
  std::string sentences;
  std::string dataset;
  std::string format = "stsb";
  std::string pairs;
  std::string measure = "cos";
  std::string oov_policy = "skip";
  std::string dump_alignment;
  std::string out;
  ConverterHyperparams hyper;
  bool lowercase = false;
  unsigned threads = 0;
  int precision = 6;
};

const std::map<std::string, ScorerKind> kMetrics = {
    {"wrd", ScorerKind::wrd},
    {"wmd", ScorerKind::wmd},
    {"wmd-sif", ScorerKind::wmd_sif},
    {"additive-cos", ScorerKind::additive_cosine},
    {"additive-cos-norm", ScorerKind::additive_normalized_cosine},
};

const std::map<std::string, WordMeasure> kMeasures = {
    {"cos", WordMeasure::cos}, {"l2", WordMeasure::l2}, {"dot", WordMeasure::dot}};

void add_common(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--embeddings,-e", cfg.embeddings, "Text embedding file")->required();
  cmd->add_flag("--lowercase", cfg.lowercase, "Lowercase input tokens before lookup");
  cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--precision", cfg.precision, "Decimal places in numeric output")
      ->check(CLI::Range(0, 17));
}

void add_converter(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--converter", cfg.converter,
                  "Vector converter pipeline: none, a, c, n, aw, awr, cwr, nwr, ...");
  cmd->add_option("--freq", cfg.freq, "Unigram frequency TSV (token<TAB>value)");
  cmd->add_option("--sentences", cfg.sentences,
                  "Corpus for common component removal, one tokenized sentence per line");
  cmd->add_option("--d-a", cfg.hyper.d_a, "All-but-the-top: directions removed")->capture_default_str();
  cmd->add_option("--alpha-c", cfg.hyper.alpha_c, "Conceptor aperture")->capture_default_str();
  cmd->add_option("--sif-a", cfg.hyper.sif_a, "SIF weight parameter a")->capture_default_str();
  cmd->add_option("--d-r", cfg.hyper.d_r, "Common component removal: directions removed")
      ->capture_default_str();
}

void add_scoring(CLI::App* cmd, CliConfig& cfg) {
  cmd->add_option("--metric,-m", cfg.metric, "Sentence similarity")
      ->check(CLI::IsMember({"wrd", "wmd", "wmd-sif", "additive-cos", "additive-cos-norm"}))
      ->capture_default_str();
  cmd->add_option("--stopwords", cfg.stopwords, "Stopword list, one token per line");
  cmd->add_option("--stopword-removal", cfg.stopword_removal,
                  "auto (WMD variants remove when a list is given), on, off")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  cmd->add_option("--oov-policy", cfg.oov_policy, "skip or error")
      ->check(CLI::IsMember({"skip", "error"}))
      ->capture_default_str();
  add_converter(cmd, cfg);
}

std::vector<Sentence> read_sentences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open sentence file {}", path));
  std::vector<Sentence> out;
  std::string raw;
  while (std::getline(in, raw)) {
    Sentence s;
    for (const auto tok : detail::split_fields(detail::strip_cr(raw), " \t")) s.emplace_back(tok);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

StsDataset read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open pairs file {}", path));
  StsDataset ds;
  ds.source = path;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = detail::split_exact(line, '\t');
    if (fields.size() < 2) {
      throw DataError(fmt::format("{}:{}: expected sentence1<TAB>sentence2", path, line_no));
    }
    StsPair pair;
    for (const auto tok : detail::split_fields(fields[0], " ")) pair.first.emplace_back(tok);
    for (const auto tok : detail::split_fields(fields[1], " ")) pair.second.emplace_back(tok);
    if (pair.first.empty() || pair.second.empty()) {
      throw DataError(fmt::format("{}:{}: empty sentence", path, line_no));
    }
    ds.pairs.push_back(std::move(pair));
  }
  return ds;
}

std::vector<Sentence> lowercased(std::vector<Sentence> sentences) {
  for (auto& s : sentences)
    for (auto& t : s) t = to_lower(t);
  return sentences;
}

// Config-level checks that must fail with exit 2 before any data is read.
PipelineSpec check_pipeline(const CliConfig& cfg, bool metric_needs_freq) {
  const auto spec = PipelineSpec::parse(cfg.converter);
  if ((spec.weight || metric_needs_freq) && cfg.freq.empty()) {
    throw ConfigError("--freq is required for SIF weighting (converter with 'w' or metric wmd-sif)");
  }
  if (cfg.stopword_removal == "on" && cfg.stopwords.empty()) {
    throw ConfigError("--stopword-removal on requires --stopwords");
  }
  return spec;
}

struct Prepared {
  std::shared_ptr<const EmbeddingTable> table;
  std::shared_ptr<const UnigramModel> unigram;
};

// Loads the table and applies the requested converter. `default_corpus`
// feeds common component removal when --sentences is absent.
Prepared prepare(const CliConfig& cfg, const PipelineSpec& spec, bool need_unigram,
                 const std::vector<Sentence>& default_corpus, std::ostream& err) {
  Prepared p;
  auto table = load_embeddings(cfg.embeddings);
  if (table.duplicate_count() > 0) {
    fmt::print(err, "warning: {} duplicate tokens ignored in {}\n", table.duplicate_count(), cfg.embeddings);
  }
  if (spec.weight || need_unigram) p.unigram = std::make_shared<UnigramModel>(load_unigram(cfg.freq));
  if (spec.is_identity()) {
    p.table = std::make_shared<EmbeddingTable>(std::move(table));
    return p;
  }
  std::vector<Sentence> corpus;
  if (spec.remove_common) {
    corpus = cfg.sentences.empty() ? default_corpus : read_sentences(cfg.sentences);
    if (cfg.lowercase) corpus = lowercased(std::move(corpus));
  }
  const auto params = fit_converter(table, spec, cfg.hyper, p.unigram, corpus);
  p.table = std::make_shared<EmbeddingTable>(convert(table, params));
  return p;
}

ScoreOptions score_options(const CliConfig& cfg, ScorerKind kind, std::ostream& err) {
  ScoreOptions opts;
  opts.lowercase = cfg.lowercase;
  opts.oov_policy = cfg.oov_policy == "error" ? OovPolicy::error : OovPolicy::skip_token;
  if (!cfg.stopwords.empty()) opts.stopwords = std::make_shared<StopwordSet>(load_stopwords(cfg.stopwords));
  const bool wmd_family = kind == ScorerKind::wmd || kind == ScorerKind::wmd_sif;
  if (cfg.stopword_removal == "on") {
    opts.remove_stopwords = true;
  } else if (cfg.stopword_removal == "auto" && wmd_family) {
    opts.remove_stopwords = static_cast<bool>(opts.stopwords);
    if (!opts.stopwords) fmt::print(err, "warning: no --stopwords given; {} keeps stopwords\n", cfg.metric);
  }
  return opts;
}

int cmd_score(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const ScorerKind kind = kMetrics.at(cfg.metric);
  const auto spec = check_pipeline(cfg, kind == ScorerKind::wmd_sif);
  const auto pairs = read_pairs(cfg.pairs);
  const auto prepared = prepare(cfg, spec, kind == ScorerKind::wmd_sif, pairs.sentences(), err);
  const auto opts = score_options(cfg, kind, err);
  const Scorer scorer{kind, prepared.unigram, cfg.hyper.sif_a};
  const bool transport = kind == ScorerKind::wrd || kind == ScorerKind::wmd || kind == ScorerKind::wmd_sif;

  std::vector<double> scores(pairs.pairs.size());
  std::vector<std::optional<Alignment>> alignments(pairs.pairs.size());
  const bool dump = !cfg.dump_alignment.empty() && transport;
  parallel_for(pairs.pairs.size(), cfg.threads, [&](std::size_t i) {
    const auto& pair = pairs.pairs[i];
    const auto& table = *prepared.table;
    if (!dump) {
      scores[i] = scorer.similarity(pair.first, pair.second, table, opts);
      return;
    }
    switch (kind) {
      case ScorerKind::wrd: alignments[i] = wrd(pair.first, pair.second, table, opts); break;
      case ScorerKind::wmd: alignments[i] = wmd(pair.first, pair.second, table, opts); break;
      default:
        alignments[i] = wmd_sif(pair.first, pair.second, table, *prepared.unigram, cfg.hyper.sif_a, opts);
        break;
    }
    scores[i] = -alignments[i]->distance;
  });
  for (const double s : scores) fmt::print(out, "{:.{}f}\n", s, cfg.precision);

  if (!cfg.dump_alignment.empty()) {
    if (!transport) {
      fmt::print(err, "warning: --dump-alignment ignored for metric {}\n", cfg.metric);
      return kExitOk;
    }
    std::ofstream dump_out(cfg.dump_alignment);
    if (!dump_out) throw DataError(fmt::format("cannot write {}", cfg.dump_alignment));
    for (std::size_t i = 0; i < alignments.size(); ++i) {
      fmt::print(dump_out, "# pair {}\n", i);
      write_alignment_tsv(dump_out, *alignments[i], cfg.precision);
    }
  }
  return kExitOk;
}

int cmd_eval(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const ScorerKind kind = kMetrics.at(cfg.metric);
  const auto spec = check_pipeline(cfg, kind == ScorerKind::wmd_sif);
  const auto dataset = parse_sts(cfg.dataset, cfg.format == "simple" ? StsFormat::simple : StsFormat::stsb);
  const auto prepared = prepare(cfg, spec, kind == ScorerKind::wmd_sif, dataset.sentences(), err);
  const auto opts = score_options(cfg, kind, err);
  const Scorer scorer{kind, prepared.unigram, cfg.hyper.sif_a};
  const auto report = evaluate_sts(dataset, scorer, *prepared.table, opts, cfg.threads);

  fmt::print(err, "{} converter={}\n", report.config, spec.tag());
  if (report.skipped_count > 0) fmt::print(err, "warning: {} pairs skipped\n", report.skipped_count);
  const int p = cfg.precision;
  fmt::print(out, "pearson_r={:.{}f} spearman_rho={:.{}f} pairs={} skipped={}\n", report.pearson_r, p,
             report.spearman_rho, p, report.scored_count(), report.skipped_count);
  fmt::print(out, "pearson_r_x100={:.{}f} spearman_rho_x100={:.{}f}\n", 100.0 * report.pearson_r, p,
             100.0 * report.spearman_rho, p);

  if (!cfg.out.empty()) {
    std::ofstream tsv(cfg.out);
    if (!tsv) throw DataError(fmt::format("cannot write {}", cfg.out));
    for (const auto& s : report.per_pair) {
      if (s.skipped) {
        fmt::print(tsv, "{}\tnan\t{:.{}f}\n", s.index, s.gold, p);
      } else {
        fmt::print(tsv, "{}\t{:.{}f}\t{:.{}f}\n", s.index, s.predicted, p, s.gold, p);
      }
    }
  }
  return kExitOk;
}

int cmd_convert(const CliConfig& cfg, std::ostream& /*out*/, std::ostream& err) {
  const auto spec = check_pipeline(cfg, false);
  if (spec.remove_common && cfg.sentences.empty()) {
    throw ConfigError("--sentences is required for common component removal ('r')");
  }
  const auto prepared = prepare(cfg, spec, false, {}, err);
  save_embeddings(*prepared.table, cfg.out);
  fmt::print(err, "converted {} vectors with pipeline {} -> {}\n", prepared.table->size(), spec.tag(), cfg.out);
  return kExitOk;
}

int cmd_wordsim(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto table = load_embeddings(cfg.embeddings);
  const auto dataset = parse_wordsim(cfg.dataset);
  const auto report = evaluate_wordsim(dataset, kMeasures.at(cfg.measure), table, cfg.lowercase);
  fmt::print(err, "{}\n", report.config);
  const int p = cfg.precision;
  fmt::print(out, "spearman_rho={:.{}f} pearson_r={:.{}f} pairs={} skipped={}\n", report.spearman_rho, p,
             report.pearson_r, p, report.scored_count(), report.skipped_count);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sentence similarity with word rotator's distance and baselines", "wrd"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto* score = app.add_subcommand("score", "Score sentence pairs (sentence1<TAB>sentence2 per line)");
  add_common(score, cfg);
  add_scoring(score, cfg);
  score->add_option("--pairs", cfg.pairs, "Pairs file")->required();
  score->add_option("--dump-alignment", cfg.dump_alignment, "Write transport plans as TSV");

  auto* eval = app.add_subcommand("eval", "Correlate a scorer with gold STS scores");
  add_common(eval, cfg);
  add_scoring(eval, cfg);
  eval->add_option("--dataset", cfg.dataset, "STS dataset")->required();
  eval->add_option("--format", cfg.format, "stsb or simple")
      ->check(CLI::IsMember({"stsb", "simple"}))
      ->capture_default_str();
  eval->add_option("--out", cfg.out, "Per-pair TSV: index predicted gold");

  auto* conv = app.add_subcommand("convert", "Fit a vector converter and write converted vectors");
  add_common(conv, cfg);
  add_converter(conv, cfg);
  conv->get_option("--converter")->required();
  conv->add_option("--out,-o", cfg.out, "Output embedding file")->required();

  auto* wsim = app.add_subcommand("wordsim", "Word similarity evaluation (cos / l2 / dot)");
  add_common(wsim, cfg);
  wsim->add_option("--dataset", cfg.dataset, "word1<TAB>word2<TAB>score file")->required();
  wsim->add_option("--measure", cfg.measure, "cos, l2 or dot")
      ->check(CLI::IsMember({"cos", "l2", "dot"}))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsageError;
  }

  try {
    if (*score) return cmd_score(cfg, out, err);
    if (*eval) return cmd_eval(cfg, out, err);
    if (*conv) return cmd_convert(cfg, out, err);
    return cmd_wordsim(cfg, out, err);
  } catch (const ConfigError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsageError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitDataError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace wrd::cli
