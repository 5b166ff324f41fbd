#include "darija/classic.hpp"

#include "darija/error.hpp"
#include "darija/rng.hpp"
#include "darija/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

namespace darija {

namespace {

constexpr std::string_view kModelMagic = "darija-model 1";

double sign_of(Label l) { return l == Label::Positive ? 1.0 : -1.0; }

void check_dims(std::span<const LabeledVector> train) {
  for (const auto& ex : train) {
    if (ex.x.size() != train.front().x.size()) throw DataError("training vectors have inconsistent dimensions");
  }
}

void write_header(std::ostream& os, std::string_view kind) { os << kModelMagic << "\nkind " << kind << '\n'; }

void read_header(text_io::LineReader& in, std::string_view kind) {
  if (in.next() != kModelMagic) in.fail("not a darija model file");
  if (const auto k = in.expect("kind"); k != kind) in.fail("expected model kind '" + std::string(kind) + "', found '" + k + "'");
}

}  // namespace

// -- Naive Bayes -------------------------------------------------------------

NbModel train_nb(std::span<const LabeledVector> train, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("NB alpha must be positive");
  if (train.empty()) throw DataError("NB needs training documents");
  check_dims(train);
  const Eigen::Index vocab = train.front().x.size();

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(kNumLabels, vocab);
  std::array<std::size_t, kNumLabels> docs{};
  for (const auto& ex : train) {
    const auto c = static_cast<Eigen::Index>(index_of(ex.y));
    ++docs[index_of(ex.y)];
    for (SparseVector::InnerIterator it(ex.x); it; ++it) counts(c, it.index()) += it.value();
  }
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    if (docs[c] == 0) {
      throw DataError("NB: class '" + std::string(to_string(label_from_index(c))) + "' has no training documents");
    }
  }

  NbModel m;
  m.alpha = alpha;
  m.log_likelihood.resize(kNumLabels, vocab);
  const auto n = static_cast<double>(train.size());
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const auto row = static_cast<Eigen::Index>(c);
    m.log_prior(row) = std::log(static_cast<double>(docs[c]) / n);
    const double denom = counts.row(row).sum() + alpha * static_cast<double>(vocab);
    for (Eigen::Index t = 0; t < vocab; ++t) m.log_likelihood(row, t) = std::log((counts(row, t) + alpha) / denom);
  }
  return m;
}

NbPrediction predict_nb(const NbModel& model, const SparseVector& doc) {
  NbPrediction p;
  p.log_scores = model.log_prior;
  for (SparseVector::InnerIterator it(doc); it; ++it) {
    if (it.index() >= model.log_likelihood.cols()) continue;
    p.log_scores += it.value() * model.log_likelihood.col(it.index());
  }
  // Scores equal up to summation rounding are ties.
  const double scale = std::max({1.0, std::abs(p.log_scores(0)), std::abs(p.log_scores(1))});
  const bool tie = std::abs(p.log_scores(1) - p.log_scores(0)) <= 1e-12 * scale;
  p.label = !tie && p.log_scores(1) > p.log_scores(0) ? Label::Positive : Label::Negative;
  return p;
}

// -- KNN ---------------------------------------------------------------------

double l2_norm(const SparseVector& v) {
  double sq = 0.0;
  for (SparseVector::InnerIterator it(v); it; ++it) sq += it.value() * it.value();
  return std::sqrt(sq);
}

double cosine_similarity(const SparseVector& a, double norm_a, const SparseVector& b, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  double dot = 0.0;
  SparseVector::InnerIterator ia(a), ib(b);
  while (ia && ib) {
    if (ia.index() < ib.index()) {
      ++ia;
    } else if (ib.index() < ia.index()) {
      ++ib;
    } else {
      dot += ia.value() * ib.value();
      ++ia;
      ++ib;
    }
  }
  return dot / (norm_a * norm_b);
}

KnnModel train_knn(std::span<const LabeledVector> train, std::size_t k) {
  if (k < 1 || k > train.size()) {
    throw ConfigError("KNN k must lie in [1, " + std::to_string(train.size()) + "], got " + std::to_string(k));
  }
  check_dims(train);
  KnnModel m;
  m.k = k;
  m.vectors.reserve(train.size());
  for (const auto& ex : train) {
    m.vectors.push_back(ex.x);
    m.labels.push_back(ex.y);
    m.norms.push_back(l2_norm(ex.x));
  }
  return m;
}

Label predict_knn(const KnnModel& model, const SparseVector& doc) {
  const auto n = model.vectors.size();
  if (n == 0) throw DataError("KNN model holds no vectors");
  const double qn = l2_norm(doc);
  std::vector<std::pair<double, std::size_t>> sims(n);
  for (std::size_t i = 0; i < n; ++i) sims[i] = {cosine_similarity(doc, qn, model.vectors[i], model.norms[i]), i};
  const auto k = std::min(model.k, n);
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
  std::array<std::size_t, kNumLabels> votes{};
  std::array<double, kNumLabels> mass{};
  for (std::size_t r = 0; r < k; ++r) {
    const auto c = index_of(model.labels[sims[r].second]);
    ++votes[c];
    mass[c] += sims[r].first;
  }
  const auto neg = index_of(Label::Negative), pos = index_of(Label::Positive);
  if (votes[pos] != votes[neg]) return votes[pos] > votes[neg] ? Label::Positive : Label::Negative;
  return mass[pos] > mass[neg] ? Label::Positive : Label::Negative;
}

// -- SVM ---------------------------------------------------------------------

SvmModel train_svm(std::span<const LabeledVector> train, const SvmOptions& options) {
  if (options.epochs < 1) throw ConfigError("SVM needs at least one epoch");
  if (!(options.lambda > 0.0)) throw ConfigError("SVM lambda must be positive");
  if (train.empty()) throw DataError("SVM needs training documents");
  check_dims(train);

  // w = scale * v, b = scale * vb; the scale absorbs the per-step shrink.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(train.front().x.size());
  double vb = 0.0;
  double scale = 1.0;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);
  std::uint64_t t = 0;

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    rng.shuffle(order);
    for (const auto i : order) {
      const auto& ex = train[i];
      ++t;
      const double eta = 1.0 / (options.lambda * static_cast<double>(t));
      const double y = sign_of(ex.y);
      const double margin = scale * (ex.x.dot(v) + vb);
      scale *= 1.0 - 1.0 / static_cast<double>(t);
      if (scale == 0.0) {
        v.setZero();
        vb = 0.0;
        scale = 1.0;
      }
      if (y * margin < 1.0) {
        const double step = eta * y / scale;
        for (SparseVector::InnerIterator it(ex.x); it; ++it) v(it.index()) += step * it.value();
        vb += step;
      }
      if (scale < 1e-9) {
        v *= scale;
        vb *= scale;
        scale = 1.0;
      }
    }
  }

  SvmModel m;
  m.weights = scale * v;
  m.bias = scale * vb;
  m.lambda = options.lambda;
  m.epochs = options.epochs;
  return m;
}

SvmPrediction predict_svm(const SvmModel& model, const SparseVector& doc) {
  double margin = model.bias;
  for (SparseVector::InnerIterator it(doc); it; ++it) {
    if (it.index() < model.weights.size()) margin += model.weights(it.index()) * it.value();
  }
  return {margin > 0.0 ? Label::Positive : Label::Negative, margin};
}

// -- Serialization -----------------------------------------------------------

void write_model(std::ostream& os, const NbModel& m) {
  write_header(os, "nb");
  os << "alpha " << text_io::format_double(m.alpha) << '\n';
  text_io::write_tensor(os, "log_prior", m.log_prior);
  text_io::write_tensor(os, "log_likelihood", m.log_likelihood);
  os << "end\n";
}

void write_model(std::ostream& os, const KnnModel& m) {
  write_header(os, "knn");
  const auto dim = m.vectors.empty() ? 0 : m.vectors.front().size();
  os << "k " << m.k << "\ndim " << dim << "\ncount " << m.vectors.size() << '\n';
  for (std::size_t i = 0; i < m.vectors.size(); ++i) {
    os << to_string(m.labels[i]) << ' ' << m.vectors[i].nonZeros();
    for (SparseVector::InnerIterator it(m.vectors[i]); it; ++it) {
      os << ' ' << it.index() << ':' << text_io::format_double(it.value());
    }
    os << '\n';
  }
  os << "end\n";
}

void write_model(std::ostream& os, const SvmModel& m) {
  write_header(os, "svm");
  os << "lambda " << text_io::format_double(m.lambda) << "\nepochs " << m.epochs << "\nbias "
     << text_io::format_double(m.bias) << '\n';
  text_io::write_tensor(os, "weights", m.weights);
  os << "end\n";
}

NbModel read_nb_model(std::istream& is) {
  text_io::LineReader in(is);
  read_header(in, "nb");
  NbModel m;
  m.alpha = text_io::parse_double(in.expect("alpha"));
  const Eigen::MatrixXd prior = text_io::read_tensor(in, "log_prior");
  if (prior.size() != 2) in.fail("log_prior must hold two values");
  m.log_prior = prior.reshaped();
  m.log_likelihood = text_io::read_tensor(in, "log_likelihood");
  if (m.log_likelihood.rows() != 2 && m.log_likelihood.size() != 0) in.fail("log_likelihood must have two rows");
  in.expect("end");
  return m;
}

KnnModel read_knn_model(std::istream& is) {
  text_io::LineReader in(is);
  read_header(in, "knn");
  KnnModel m;
  m.k = text_io::parse_size(in.expect("k"));
  const auto dim = static_cast<Eigen::Index>(text_io::parse_size(in.expect("dim")));
  const auto count = text_io::parse_size(in.expect("count"));
  for (std::size_t i = 0; i < count; ++i) {
    const auto line = in.next();
    const auto f = text_io::split_fields(line);
    if (f.size() < 2) in.fail("malformed stored vector");
    const auto label = parse_label(f[0]);
    if (!label) in.fail("bad label '" + std::string(f[0]) + "'");
    const auto nnz = text_io::parse_size(f[1]);
    if (f.size() != 2 + nnz) in.fail("stored vector entry count mismatch");
    SparseVector v(dim);
    Eigen::Index prev = -1;
    for (std::size_t e = 0; e < nnz; ++e) {
      const auto field = f[2 + e];
      const auto colon = field.find(':');
      if (colon == std::string_view::npos) in.fail("malformed entry '" + std::string(field) + "'");
      const auto idx = static_cast<Eigen::Index>(text_io::parse_size(field.substr(0, colon)));
      if (idx <= prev || idx >= dim) in.fail("entry index out of order or range");
      v.insertBack(idx) = text_io::parse_double(field.substr(colon + 1));
      prev = idx;
    }
    m.vectors.push_back(std::move(v));
    m.labels.push_back(*label);
    m.norms.push_back(l2_norm(m.vectors.back()));
  }
  in.expect("end");
  if (m.k < 1 || m.k > m.vectors.size()) in.fail("k out of range");
  return m;
}

SvmModel read_svm_model(std::istream& is) {
  text_io::LineReader in(is);
  read_header(in, "svm");
  SvmModel m;
  m.lambda = text_io::parse_double(in.expect("lambda"));
  m.epochs = text_io::parse_size(in.expect("epochs"));
  m.bias = text_io::parse_double(in.expect("bias"));
  m.weights = text_io::read_tensor(in, "weights").reshaped();
  in.expect("end");
  return m;
}

}  // namespace darija
