#include "wrdist/converter.hpp"

#include <cmath>

#include <fmt/format.h>

#include "wrdist/errors.hpp"

namespace wrd {

namespace {

Eigen::MatrixXd remove_directions(std::size_t dim, const std::vector<Eigen::VectorXd>& directions) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
  for (const auto& u : directions) a -= u * u.transpose();
  return a;
}

void require_nonempty(const EmbeddingTable& table) {
  if (table.empty()) throw DataError("cannot fit a converter on an empty table");
}

}  // namespace

Projection Projection::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return {Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d)};
}

Eigen::VectorXd Projection::apply(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != matrix.cols()) {
    throw DimensionError(fmt::format("projection expects dimension {}, got {}", matrix.cols(), v.size()));
  }
  return matrix * (v - offset);
}

PrincipalDirections principal_directions(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                         std::size_t k, bool center) {
  const auto dim = static_cast<std::size_t>(rows.cols());
  if (rows.rows() == 0) throw DataError("principal_directions: no rows");
  if (k > dim) {
    throw ConfigError(fmt::format("cannot take {} principal directions in dimension {}", k, dim));
  }
  if (!rows.allFinite()) throw DataError("principal_directions: non-finite input");
  PrincipalDirections out;
  if (k == 0) return out;

  Eigen::MatrixXd x = rows;
  if (center) x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd moment = (x.transpose() * x) / static_cast<double>(rows.rows());

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(moment);
  if (solver.info() != Eigen::Success) throw DataError("eigendecomposition failed");
  const auto d = static_cast<Eigen::Index>(dim);
  for (std::size_t j = 0; j < k; ++j) {
    // Eigen sorts eigenvalues ascending.
    const Eigen::Index col = d - 1 - static_cast<Eigen::Index>(j);
    Eigen::VectorXd u = solver.eigenvectors().col(col);
    Eigen::Index largest = 0;
    u.cwiseAbs().maxCoeff(&largest);
    if (u[largest] < 0.0) u = -u;
    out.directions.push_back(std::move(u));
    out.eigenvalues.push_back(solver.eigenvalues()[col]);
  }
  return out;
}

Projection fit_abtt(const EmbeddingTable& table, std::size_t d_a) {
  require_nonempty(table);
  if (d_a > table.dimension()) {
    throw ConfigError(fmt::format("d_a = {} exceeds dimension {}", d_a, table.dimension()));
  }
  const Eigen::MatrixXd rows = table.as_matrix();
  const auto top = principal_directions(rows, d_a, /*center=*/true);
  return {remove_directions(table.dimension(), top.directions), rows.colwise().mean().transpose()};
}

Projection fit_conceptor(const EmbeddingTable& table, double alpha) {
  require_nonempty(table);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("conceptor alpha must be positive");
  const Eigen::MatrixXd rows = table.as_matrix();
  const Eigen::MatrixXd moment = (rows.transpose() * rows) / static_cast<double>(rows.rows());
  if (!moment.allFinite()) throw DataError("conceptor: second-moment matrix is not finite");

  const double inv_alpha_sq = 1.0 / (alpha * alpha);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(moment);
  if (solver.info() != Eigen::Success) throw DataError("eigendecomposition failed");
  // R is PSD; clamp rounding noise before mapping lambda -> alpha^-2 / (lambda + alpha^-2).
  const Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd spectrum =
      lambda.unaryExpr([inv_alpha_sq](double l) { return inv_alpha_sq / (l + inv_alpha_sq); });
  const Eigen::MatrixXd& q = solver.eigenvectors();
  const auto d = static_cast<Eigen::Index>(table.dimension());
  return {q * spectrum.asDiagonal() * q.transpose(), Eigen::VectorXd::Zero(d)};
}

Projection fit_dimnorm(const EmbeddingTable& table) {
  require_nonempty(table);
  const Eigen::MatrixXd rows = table.as_matrix();
  const Eigen::VectorXd mean = rows.colwise().mean().transpose();
  const Eigen::VectorXd sigma =
      ((rows.rowwise() - mean.transpose()).array().square().colwise().sum() /
       static_cast<double>(rows.rows()))
          .sqrt()
          .transpose();
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    if (!(sigma[j] > 1e-12)) throw DataError(fmt::format("dimension {} has zero variance", j));
  }
  return {sigma.cwiseInverse().asDiagonal(), mean};
}

double sif_weight(const UnigramModel& unigram, const std::string& token, double a) {
  return a / (unigram.probability(token) + a);
}

Projection fit_ccr(const std::vector<Sentence>& sentences, const EmbeddingTable& table,
                   const Projection& f1, const std::optional<SifWeighting>& weighting,
                   std::size_t d_r) {
  const std::size_t dim = table.dimension();
  if (d_r > dim) throw ConfigError(fmt::format("d_r = {} exceeds dimension {}", d_r, dim));
  if (f1.dimension() != dim) throw DimensionError("f1 dimension does not match the table");

  std::vector<Eigen::VectorXd> vectors;
  for (const auto& sentence : sentences) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    bool any = false;
    for (const auto& token : sentence) {
      const auto idx = table.index_of(token);
      if (!idx) continue;
      const double alpha = weighting ? weighting->weight(token) : 1.0;
      s += alpha * f1.apply(table.vector(*idx));
      any = true;
    }
    if (any) vectors.push_back(std::move(s));
  }
  if (vectors.empty()) throw DataError("common component removal: no sentence has a known token");

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < vectors.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = vectors[i];
  const auto top = principal_directions(rows, d_r, /*center=*/false);
  return {remove_directions(dim, top.directions), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim))};
}

PipelineSpec PipelineSpec::parse(std::string_view tag) {
  PipelineSpec spec;
  if (tag == "none" || tag.empty()) return spec;
  std::size_t pos = 0;
  switch (tag[0]) {
    case 'a': spec.denoise = Denoise::abtt; ++pos; break;
    case 'c': spec.denoise = Denoise::conceptor; ++pos; break;
    case 'n': spec.denoise = Denoise::dimnorm; ++pos; break;
    default: break;
  }
  if (pos < tag.size() && tag[pos] == 'w') {
    spec.weight = true;
    ++pos;
  }
  if (pos < tag.size() && tag[pos] == 'r') {
    spec.remove_common = true;
    ++pos;
  }
  if (pos != tag.size()) {
    throw ConfigError(fmt::format("unknown converter pipeline '{}' (expected e.g. none, a, aw, awr, cwr, nwr)", tag));
  }
  return spec;
}

std::string PipelineSpec::tag() const {
  std::string out;
  switch (denoise) {
    case Denoise::abtt: out += 'a'; break;
    case Denoise::conceptor: out += 'c'; break;
    case Denoise::dimnorm: out += 'n'; break;
    case Denoise::none: break;
  }
  if (weight) out += 'w';
  if (remove_common) out += 'r';
  return out.empty() ? "none" : out;
}

ConverterParams fit_converter(const EmbeddingTable& table, const PipelineSpec& spec,
                              const ConverterHyperparams& hyper,
                              std::shared_ptr<const UnigramModel> unigram,
                              const std::vector<Sentence>& sentences) {
  ConverterParams params;
  params.pipeline_tag = spec.tag();
  switch (spec.denoise) {
    case PipelineSpec::Denoise::abtt: params.f1 = fit_abtt(table, hyper.d_a); break;
    case PipelineSpec::Denoise::conceptor: params.f1 = fit_conceptor(table, hyper.alpha_c); break;
    case PipelineSpec::Denoise::dimnorm: params.f1 = fit_dimnorm(table); break;
    case PipelineSpec::Denoise::none: break;
  }
  if (spec.weight) {
    if (!unigram) throw ConfigError("SIF weighting requires a unigram frequency model");
    if (!(hyper.sif_a > 0.0)) throw ConfigError("SIF parameter a must be positive");
    params.weighting = SifWeighting{std::move(unigram), hyper.sif_a};
  }
  if (spec.remove_common) {
    if (sentences.empty()) throw ConfigError("common component removal requires sentences");
    params.f3 = fit_ccr(sentences, table, params.f1 ? *params.f1 : Projection::identity(table.dimension()),
                        params.weighting, hyper.d_r);
  }
  return params;
}

EmbeddingTable convert(const EmbeddingTable& table, const ConverterParams& params) {
  for (const auto* p : {params.f1 ? &*params.f1 : nullptr, params.f3 ? &*params.f3 : nullptr}) {
    if (p && p->dimension() != table.dimension()) {
      throw DimensionError(fmt::format("converter fitted for dimension {}, table has {}",
                                       p->dimension(), table.dimension()));
    }
  }
  EmbeddingTable out(table.dimension(), table.name());
  Eigen::VectorXd v;
  for (std::size_t i = 0; i < table.size(); ++i) {
    v = table.vector(i);
    if (params.f1) v = params.f1->apply(v);
    if (params.weighting) v *= params.weighting->weight(table.token(i));
    if (params.f3) v = params.f3->apply(v);
    out.add(table.token(i), v);
  }
  return out;
}

}  // namespace wrd
