#include "simplexq/distill.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <sstream>

#include "simplexq/errors.hpp"

namespace simplexq {

namespace {

constexpr double kMassTol = 1e-12;
constexpr double kMergeTol = 1e-12;

std::vector<double> conditional_column(const JointDistribution& j,
                                       std::uint64_t b) {
  const double pb = j.marginal_b()[b];
  std::vector<double> x(j.alphabet_a());
  for (std::uint64_t a = 0; a < j.alphabet_a(); ++a) {
    x[a] = j.prob(a, b) / pb;
  }
  return x;
}

double mutual_information_raw(const std::vector<double>& matrix,
                              std::uint64_t ka, std::uint64_t kb) {
  std::vector<double> pa(ka, 0.0), pb(kb, 0.0);
  for (std::uint64_t a = 0; a < ka; ++a) {
    for (std::uint64_t b = 0; b < kb; ++b) {
      pa[a] += matrix[a * kb + b];
      pb[b] += matrix[a * kb + b];
    }
  }
  double acc = 0.0;
  for (std::uint64_t a = 0; a < ka; ++a) {
    for (std::uint64_t b = 0; b < kb; ++b) {
      const double p = matrix[a * kb + b];
      if (p > 0.0) acc += p * std::log(p / (pa[a] * pb[b]));
    }
  }
  return acc;
}

std::uint64_t label_count(const std::vector<std::uint64_t>& labels) {
  std::uint64_t m = 0;
  for (std::uint64_t l : labels) m = std::max(m, l + 1);
  return m;
}

// I(A;B) - I(A;h(B)) via the collapsed joint over (A, h(B)).
double info_loss_of(const JointDistribution& j,
                    const std::vector<std::uint64_t>& labels) {
  const std::uint64_t ka = j.alphabet_a(), kb = j.alphabet_b();
  const std::uint64_t m = label_count(labels);
  std::vector<double> collapsed(ka * m, 0.0);
  for (std::uint64_t a = 0; a < ka; ++a) {
    for (std::uint64_t b = 0; b < kb; ++b) {
      collapsed[a * m + labels[b]] += j.prob(a, b);
    }
  }
  return mutual_information(j) - mutual_information_raw(collapsed, ka, m);
}

// sum_b P_B(b) KL(x(b) || z_{h(b)}) with conditional-expectation cells;
// optionally emits the representatives (cells no b maps to are dropped, so
// representative r corresponds to the r-th label value actually in use).
double kl_loss_of(const JointDistribution& j,
                  const std::vector<std::uint64_t>& labels,
                  std::vector<ProbVector>* reps_out) {
  const std::uint64_t ka = j.alphabet_a(), kb = j.alphabet_b();
  const std::uint64_t m = label_count(labels);
  std::vector<double> mass(m, 0.0);
  std::vector<double> mean(m * ka, 0.0);
  for (std::uint64_t b = 0; b < kb; ++b) {
    const std::uint64_t l = labels[b];
    mass[l] += j.marginal_b()[b];
    for (std::uint64_t a = 0; a < ka; ++a) mean[l * ka + a] += j.prob(a, b);
  }
  for (std::uint64_t l = 0; l < m; ++l) {
    if (mass[l] > 0.0) {
      for (std::uint64_t a = 0; a < ka; ++a) mean[l * ka + a] /= mass[l];
    }
  }
  double acc = 0.0;
  for (std::uint64_t b = 0; b < kb; ++b) {
    const double pb = j.marginal_b()[b];
    if (pb <= 0.0) continue;
    const std::uint64_t l = labels[b];
    for (std::uint64_t a = 0; a < ka; ++a) {
      const double p = j.prob(a, b);
      if (p > 0.0) acc += p * std::log(p / (pb * mean[l * ka + a]));
    }
  }
  if (reps_out != nullptr) {
    reps_out->clear();
    for (std::uint64_t l = 0; l < m; ++l) {
      if (mass[l] <= 0.0) continue;  // empty cell: dropped
      std::vector<double> z(mean.begin() + static_cast<std::ptrdiff_t>(l * ka),
                            mean.begin() +
                                static_cast<std::ptrdiff_t>((l + 1) * ka));
      reps_out->push_back(ProbVector::normalized(std::move(z)));
    }
  }
  return acc;
}

// Exhaustive separable-labeling search; `use_kl` picks which loss to
// minimize. Identical columns (push-forward atoms) share a label.
DistillOutcome brute_force_impl(const JointDistribution& j, std::uint64_t M,
                                bool use_kl) {
  if (M == 0) throw DomainError("brute force distiller: need M >= 1");
  const auto atoms = pushforward_prior(j);
  const std::size_t d = atoms.size();
  if (static_cast<double>(d) * std::log(static_cast<double>(M)) >
      std::log(1e7) + 1e-9) {
    throw DomainError(
        "brute force distiller: M^(distinct columns) exceeds 1e7");
  }
  std::vector<std::uint64_t> digits(d, 0);
  std::vector<std::uint64_t> labels(j.alphabet_b(), 0);
  std::vector<std::uint64_t> best_labels;
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    for (std::size_t g = 0; g < d; ++g) {
      for (std::uint64_t b : atoms[g].columns) labels[b] = digits[g];
    }
    const double loss = use_kl ? kl_loss_of(j, labels, nullptr)
                               : info_loss_of(j, labels);
    if (loss < best) {
      best = loss;
      best_labels = labels;
    }
    std::size_t pos = 0;
    while (pos < d && ++digits[pos] == M) {
      digits[pos] = 0;
      ++pos;
    }
    if (pos == d) break;
  }
  DistillOutcome out;
  out.labels = std::move(best_labels);
  out.kl_loss = kl_loss_of(j, out.labels, &out.representatives);
  out.info_loss = info_loss_of(j, out.labels);
  return out;
}

}  // namespace

JointDistribution::JointDistribution(std::vector<double> matrix,
                                     std::uint64_t ka, std::uint64_t kb)
    : matrix_(std::move(matrix)), ka_(ka), kb_(kb), pa_(ka, 0.0), pb_(kb, 0.0) {
  for (std::uint64_t a = 0; a < ka_; ++a) {
    for (std::uint64_t b = 0; b < kb_; ++b) {
      pa_[a] += matrix_[a * kb_ + b];
      pb_[b] += matrix_[a * kb_ + b];
    }
  }
}

JointDistribution JointDistribution::validated(std::vector<double> matrix,
                                               std::uint64_t alphabet_a,
                                               std::uint64_t alphabet_b) {
  if (alphabet_a == 0 || alphabet_b == 0) {
    throw DomainError("joint distribution: empty alphabet");
  }
  if (matrix.size() != alphabet_a * alphabet_b) {
    throw DomainError("joint distribution: matrix size mismatch");
  }
  double total = 0.0;
  for (double v : matrix) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DomainError("joint distribution: entries must be finite and >= 0");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kMassTol) {
    throw DomainError("joint distribution: total mass differs from 1 by " +
                      std::to_string(total - 1.0));
  }
  return JointDistribution(std::move(matrix), alphabet_a, alphabet_b);
}

JointDistribution JointDistribution::from_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool first_data = true;
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> cells;
  std::uint64_t max_a = 0, max_b = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::stringstream row(line);
    std::string fa, fb, fp;
    if (!std::getline(row, fa, ',') || !std::getline(row, fb, ',') ||
        !std::getline(row, fp)) {
      throw ParseError("joint csv: expected a,b,probability", line_no);
    }
    std::uint64_t a, b;
    double p;
    try {
      if (fa.find('-') != std::string::npos ||
          fb.find('-') != std::string::npos) {
        throw std::invalid_argument("negative index");
      }
      std::size_t used = 0;
      a = std::stoull(fa, &used);
      b = std::stoull(fb, &used);
      p = std::stod(fp, &used);
    } catch (const std::exception&) {
      if (first_data) {  // tolerated header row
        first_data = false;
        continue;
      }
      throw ParseError("joint csv: malformed row", line_no);
    }
    first_data = false;
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ParseError("joint csv: probability must be finite and >= 0",
                       line_no);
    }
    if (!cells.emplace(std::make_pair(a, b), p).second) {
      throw ParseError("joint csv: duplicate cell", line_no);
    }
    max_a = std::max(max_a, a);
    max_b = std::max(max_b, b);
  }
  if (cells.empty()) throw ParseError("joint csv: no data rows", line_no);
  if ((max_a + 1) > 100000000ull / (max_b + 1)) {
    throw DomainError("joint csv: alphabet sizes too large");
  }
  std::vector<double> matrix((max_a + 1) * (max_b + 1), 0.0);
  for (const auto& [key, p] : cells) {
    matrix[key.first * (max_b + 1) + key.second] = p;
  }
  return validated(std::move(matrix), max_a + 1, max_b + 1);
}

ProbVector JointDistribution::column(std::uint64_t b) const {
  if (b >= kb_) throw DomainError("joint distribution: column out of range");
  if (!(pb_[b] > 0.0)) {
    throw DomainError("joint distribution: conditional of a zero-mass column");
  }
  return ProbVector::normalized(conditional_column(*this, b));
}

double mutual_information(const JointDistribution& j) {
  double acc = 0.0;
  for (std::uint64_t a = 0; a < j.alphabet_a(); ++a) {
    for (std::uint64_t b = 0; b < j.alphabet_b(); ++b) {
      const double p = j.prob(a, b);
      if (p > 0.0) {
        acc += p * std::log(p / (j.marginal_a()[a] * j.marginal_b()[b]));
      }
    }
  }
  return acc;
}

std::vector<PushforwardAtom> pushforward_prior(const JointDistribution& j) {
  std::vector<PushforwardAtom> atoms;
  std::vector<std::vector<double>> raw;  // unnormalized conditionals per atom
  for (std::uint64_t b = 0; b < j.alphabet_b(); ++b) {
    const double pb = j.marginal_b()[b];
    if (!(pb > 0.0)) continue;
    std::vector<double> x = conditional_column(j, b);
    bool merged = false;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      bool same = true;
      for (std::uint64_t a = 0; a < j.alphabet_a(); ++a) {
        if (std::abs(x[a] - raw[i][a]) > kMergeTol) {
          same = false;
          break;
        }
      }
      if (same) {
        atoms[i].mass += pb;
        atoms[i].columns.push_back(b);
        merged = true;
        break;
      }
    }
    if (!merged) {
      atoms.push_back(
          PushforwardAtom{ProbVector::normalized(x), pb, {b}});
      raw.push_back(std::move(x));
    }
  }
  return atoms;
}

DistillOutcome distiller_from_quantizer(const JointDistribution& j,
                                        const Quantizer& q) {
  const std::uint64_t kb = j.alphabet_b();
  std::map<std::vector<std::uint64_t>, std::uint64_t> cells;
  std::vector<std::uint64_t> labels(kb, 0);
  std::vector<std::uint64_t> codes(j.alphabet_a());
  for (std::uint64_t b = 0; b < kb; ++b) {
    if (!(j.marginal_b()[b] > 0.0)) continue;  // carries nothing; label 0
    const std::vector<double> x = conditional_column(j, b);
    q.encode_batch(x.data(), x.size(), codes.data());
    const auto [it, fresh] =
        cells.emplace(codes, static_cast<std::uint64_t>(cells.size()));
    labels[b] = it->second;
    (void)fresh;
  }
  DistillOutcome out;
  out.labels = std::move(labels);
  out.kl_loss = kl_loss_of(j, out.labels, &out.representatives);
  out.info_loss = info_loss_of(j, out.labels);
  if (std::abs(out.info_loss - out.kl_loss) > 1e-10) {
    throw NumericalError(
        "distiller_from_quantizer: information loss and cell KL expectation "
        "disagree beyond 1e-10");
  }
  return out;
}

DistillOutcome brute_force_distiller(const JointDistribution& j,
                                     std::uint64_t M) {
  return brute_force_impl(j, M, /*use_kl=*/false);
}

DistillOutcome brute_force_quantizer(const JointDistribution& j,
                                     std::uint64_t M) {
  return brute_force_impl(j, M, /*use_kl=*/true);
}

DegradingCostBounds degrading_cost_bounds(std::uint64_t K, double log_m) {
  if (K < 5) throw DomainError("degrading_cost_bounds: need K >= 5");
  if (!(log_m > 0.0)) throw DomainError("degrading_cost_bounds: need M > 1");
  const double Kd = static_cast<double>(K);
  const double logk = std::log(Kd);
  DegradingCostBounds out;
  out.K = K;
  out.log_m = log_m;

  const double floor_n =
      std::ceil(8.0 * std::log(2.0 * std::sqrt(Kd * logk) + 1.0));
  if (log_m / Kd > std::log(floor_n)) {
    out.compander.available = true;
    out.compander.value = (1.0 + 18.0 * std::log(logk) / logk) *
                          std::exp(-2.0 / Kd * log_m) * logk * logk;
  } else {
    out.compander.reason =
        "needs M^(1/K) > ceil(8 log(2 sqrt(K log K) + 1))";
  }

  if (log_m / (Kd - 1.0) >= std::log(4.0)) {
    out.covering_linear.available = true;
    out.covering_linear.value =
        1268.0 * (Kd - 1.0) * std::exp(-2.0 / (Kd - 1.0) * log_m);
  } else {
    out.covering_linear.reason = "needs M^(1/(K-1)) >= 4";
  }

  out.covering_log.available = true;
  out.covering_log.value = 800.0 * logk * std::exp(-2.0 / (Kd - 1.0) * log_m);

  double best = std::numeric_limits<double>::infinity();
  if (out.compander.available && out.compander.value < best) {
    best = out.compander.value;
    out.smallest = "compander";
  }
  if (out.covering_linear.available && out.covering_linear.value < best) {
    best = out.covering_linear.value;
    out.smallest = "covering_linear";
  }
  if (out.covering_log.available && out.covering_log.value < best) {
    best = out.covering_log.value;
    out.smallest = "covering_log";
  }
  return out;
}

}  // namespace simplexq
