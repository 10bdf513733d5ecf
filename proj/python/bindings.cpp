#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wrdist/converter.hpp"
#include "wrdist/errors.hpp"
#include "wrdist/evaluation.hpp"
#include "wrdist/similarity.hpp"
#include "wrdist/transport.hpp"

namespace py = pybind11;

namespace {

wrd::ScoreOptions options(bool lowercase, std::shared_ptr<const wrd::StopwordSet> stopwords,
                          const std::string& oov) {
  wrd::ScoreOptions opts;
  opts.lowercase = lowercase;
  opts.remove_stopwords = stopwords != nullptr;
  opts.stopwords = std::move(stopwords);
  if (oov == "error") {
    opts.oov_policy = wrd::OovPolicy::error;
  } else if (oov != "skip") {
    throw wrd::ConfigError("oov must be 'skip' or 'error'");
  }
  return opts;
}

wrd::ScorerKind scorer_kind(const std::string& name) {
  if (name == "wrd") return wrd::ScorerKind::wrd;
  if (name == "wmd") return wrd::ScorerKind::wmd;
  if (name == "wmd-sif") return wrd::ScorerKind::wmd_sif;
  if (name == "additive-cos") return wrd::ScorerKind::additive_cosine;
  if (name == "additive-cos-norm") return wrd::ScorerKind::additive_normalized_cosine;
  throw wrd::ConfigError("unknown metric: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Word rotator's distance and related sentence similarity measures";

  auto data_error = py::register_exception<wrd::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<wrd::DimensionError>(m, "DimensionError", data_error.ptr());
  py::register_exception<wrd::ZeroNormError>(m, "ZeroNormError", data_error.ptr());
  py::register_exception<wrd::EmptyBagError>(m, "EmptyBagError", data_error.ptr());
  py::register_exception<wrd::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<wrd::EmbeddingTable>(m, "EmbeddingTable")
      .def(py::init<std::size_t, std::string>(), py::arg("dimension"), py::arg("name") = "")
      .def("add", &wrd::EmbeddingTable::add, py::arg("token"), py::arg("values"))
      .def("lookup", &wrd::EmbeddingTable::lookup)
      .def("__contains__", &wrd::EmbeddingTable::contains)
      .def("__len__", &wrd::EmbeddingTable::size)
      .def_property_readonly("dimension", &wrd::EmbeddingTable::dimension)
      .def_property_readonly("tokens", &wrd::EmbeddingTable::tokens)
      .def_property_readonly("duplicate_count", &wrd::EmbeddingTable::duplicate_count)
      .def("as_matrix", &wrd::EmbeddingTable::as_matrix);

  m.def("load_embeddings", &wrd::load_embeddings, py::arg("path"), py::arg("expected_dim") = std::nullopt);
  m.def("save_embeddings", &wrd::save_embeddings, py::arg("table"), py::arg("path"));

  py::class_<wrd::UnigramModel, std::shared_ptr<wrd::UnigramModel>>(m, "UnigramModel")
      .def(py::init<std::unordered_map<std::string, double>>(), py::arg("probabilities"))
      .def("probability", &wrd::UnigramModel::probability);
  m.def("load_unigram", [](const std::filesystem::path& p) {
    return std::make_shared<wrd::UnigramModel>(wrd::load_unigram(p));
  });

  py::class_<wrd::StopwordSet, std::shared_ptr<wrd::StopwordSet>>(m, "StopwordSet")
      .def(py::init<std::unordered_set<std::string>>(), py::arg("tokens"))
      .def("__contains__", &wrd::StopwordSet::contains)
      .def("__len__", &wrd::StopwordSet::size);
  m.def("load_stopwords", [](const std::filesystem::path& p) {
    return std::make_shared<wrd::StopwordSet>(wrd::load_stopwords(p));
  });

  m.def(
      "emd",
      [](const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::MatrixXd& cost) {
        auto plan = wrd::emd(a, b, cost);
        return py::make_tuple(plan.cost, plan.plan);
      },
      py::arg("source_mass"), py::arg("target_mass"), py::arg("cost"),
      "Exact earth mover's distance. Returns (cost, plan).");

  py::class_<wrd::Alignment>(m, "Alignment")
      .def_readonly("distance", &wrd::Alignment::distance)
      .def_property_readonly("plan", [](const wrd::Alignment& a) { return a.plan.plan; })
      .def_readonly("cost", &wrd::Alignment::cost)
      .def_readonly("source_tokens", &wrd::Alignment::source_tokens)
      .def_readonly("target_tokens", &wrd::Alignment::target_tokens);

  const auto score_args = [](auto fn) {
    return [fn](const wrd::Sentence& s, const wrd::Sentence& t, const wrd::EmbeddingTable& table,
                bool lowercase, std::shared_ptr<const wrd::StopwordSet> stopwords, const std::string& oov) {
      return fn(s, t, table, options(lowercase, std::move(stopwords), oov));
    };
  };
#define WRDIST_SCORE_KWARGS                                                                            \
  py::arg("s"), py::arg("t"), py::arg("table"), py::kw_only(), py::arg("lowercase") = false,          \
      py::arg("stopwords") = nullptr, py::arg("oov") = "skip"
  m.def("wrd", score_args([](auto&&... a) { return wrd::wrd(a...); }), WRDIST_SCORE_KWARGS);
  m.def("wmd", score_args([](auto&&... a) { return wrd::wmd(a...); }), WRDIST_SCORE_KWARGS);
  m.def("additive_cosine", score_args([](auto&&... a) { return wrd::additive_cosine(a...); }),
        WRDIST_SCORE_KWARGS);
  m.def("additive_normalized_cosine",
        score_args([](auto&&... a) { return wrd::additive_normalized_cosine(a...); }), WRDIST_SCORE_KWARGS);
#undef WRDIST_SCORE_KWARGS
  m.def(
      "wmd_sif",
      [](const wrd::Sentence& s, const wrd::Sentence& t, const wrd::EmbeddingTable& table,
         const wrd::UnigramModel& unigram, double a, bool lowercase,
         std::shared_ptr<const wrd::StopwordSet> stopwords, const std::string& oov) {
        return wrd::wmd_sif(s, t, table, unigram, a, options(lowercase, std::move(stopwords), oov));
      },
      py::arg("s"), py::arg("t"), py::arg("table"), py::arg("unigram"), py::arg("a") = 1e-3, py::kw_only(),
      py::arg("lowercase") = false, py::arg("stopwords") = nullptr, py::arg("oov") = "skip");

  m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return wrd::pearson(x, y); });
  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return wrd::spearman(x, y); });

  py::class_<wrd::Projection>(m, "Projection")
      .def_readonly("matrix", &wrd::Projection::matrix)
      .def_readonly("offset", &wrd::Projection::offset)
      .def("apply", &wrd::Projection::apply);

  py::class_<wrd::ConverterParams>(m, "ConverterParams")
      .def_readonly("f1", &wrd::ConverterParams::f1)
      .def_readonly("f3", &wrd::ConverterParams::f3)
      .def_readonly("pipeline_tag", &wrd::ConverterParams::pipeline_tag);

  m.def(
      "fit_converter",
      [](const wrd::EmbeddingTable& table, const std::string& tag, std::shared_ptr<const wrd::UnigramModel> unigram,
         const std::vector<wrd::Sentence>& sentences, std::size_t d_a, double alpha_c, double sif_a,
         std::size_t d_r) {
        return wrd::fit_converter(table, wrd::PipelineSpec::parse(tag), {d_a, alpha_c, sif_a, d_r},
                                  std::move(unigram), sentences);
      },
      py::arg("table"), py::arg("pipeline"), py::arg("unigram") = nullptr,
      py::arg("sentences") = std::vector<wrd::Sentence>{}, py::kw_only(), py::arg("d_a") = 3,
      py::arg("alpha_c") = 2.0, py::arg("sif_a") = 1e-3, py::arg("d_r") = 5);
  m.def("convert", &wrd::convert, py::arg("table"), py::arg("params"));

  py::class_<wrd::EvaluationReport>(m, "EvaluationReport")
      .def_readonly("pearson_r", &wrd::EvaluationReport::pearson_r)
      .def_readonly("spearman_rho", &wrd::EvaluationReport::spearman_rho)
      .def_readonly("skipped_count", &wrd::EvaluationReport::skipped_count)
      .def_property_readonly("scored_count", &wrd::EvaluationReport::scored_count)
      .def_property_readonly("predictions", [](const wrd::EvaluationReport& r) {
        std::vector<std::optional<double>> out;
        for (const auto& p : r.per_pair) out.push_back(p.skipped ? std::nullopt : std::optional(p.predicted));
        return out;
      });

  m.def(
      "evaluate",
      [](const std::vector<std::tuple<wrd::Sentence, wrd::Sentence, double>>& pairs, const wrd::EmbeddingTable& table,
         const std::string& metric, std::shared_ptr<const wrd::UnigramModel> unigram, bool lowercase,
         std::shared_ptr<const wrd::StopwordSet> stopwords, const std::string& oov, unsigned threads) {
        wrd::StsDataset ds;
        for (const auto& [s, t, gold] : pairs) ds.pairs.push_back({s, t, gold});
        wrd::Scorer scorer{scorer_kind(metric), std::move(unigram)};
        py::gil_scoped_release release;
        return wrd::evaluate_sts(ds, scorer, table, options(lowercase, std::move(stopwords), oov), threads);
      },
      py::arg("pairs"), py::arg("table"), py::arg("metric") = "wrd", py::kw_only(), py::arg("unigram") = nullptr,
      py::arg("lowercase") = false, py::arg("stopwords") = nullptr, py::arg("oov") = "skip", py::arg("threads") = 0,
      "Scores (s, t, gold) triples and correlates predictions with gold.");
}
