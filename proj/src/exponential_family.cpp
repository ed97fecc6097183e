#include "kbody/exponential_family.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <json.hpp>

#include "kbody/errors.hpp"

namespace kbody {

KLocalHamiltonian::KLocalHamiltonian(int n_qubits, int k) : k_(k), terms_(n_qubits) {
  if (k < 0 || k > n_qubits) throw ArgumentError("locality must lie in [0, N]");
}

KLocalHamiltonian::KLocalHamiltonian(int k, PauliExpansion terms) : k_(k), terms_(std::move(terms)) {
  if (k < 0 || k > terms_.n_qubits()) throw ArgumentError("locality must lie in [0, N]");
  if (terms_.max_weight() > k) {
    throw ArgumentError("Hamiltonian term of weight " + std::to_string(terms_.max_weight()) +
                        " exceeds locality " + std::to_string(k));
  }
}

KLocalHamiltonian KLocalHamiltonian::from_coefficients(int n_qubits, int k, const std::vector<PauliString>& basis,
                                                       const std::vector<double>& theta) {
  if (basis.size() != theta.size()) throw DimensionError("basis and coefficient counts differ");
  KLocalHamiltonian h(n_qubits, k);
  for (std::size_t i = 0; i < basis.size(); ++i) h.add_term(basis[i], theta[i]);
  return h;
}

KLocalHamiltonian KLocalHamiltonian::random(int n_qubits, int k, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  KLocalHamiltonian h(n_qubits, k);
  for (const auto& p : coordinate_basis(n_qubits, k)) h.add_term(p, normal(rng));
  return h;
}

KLocalHamiltonian KLocalHamiltonian::from_json(const std::string& text, int k) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError(std::string("Hamiltonian JSON: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw ArgumentError("Hamiltonian JSON must be a non-empty list");
  std::vector<std::pair<PauliString, double>> terms;
  int n = -1;
  int max_weight = 0;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("pauli") || !item.contains("coeff") || !item["pauli"].is_string() ||
        !item["coeff"].is_number()) {
      throw ArgumentError("Hamiltonian JSON entries need a string \"pauli\" and a numeric \"coeff\"");
    }
    PauliString p = PauliString::parse(item["pauli"].get<std::string>());
    if (n >= 0 && p.n_qubits() != n) throw DimensionError("Hamiltonian terms act on different qubit counts");
    n = p.n_qubits();
    max_weight = std::max(max_weight, p.weight());
    terms.emplace_back(p, item["coeff"].get<double>());
  }
  KLocalHamiltonian h(n, k < 0 ? max_weight : k);
  for (const auto& [p, c] : terms) h.add_term(p, c);
  return h;
}

std::string KLocalHamiltonian::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [p, c] : terms_.terms()) j.push_back({{"pauli", p.to_string()}, {"coeff", c}});
  return j.dump();
}

void KLocalHamiltonian::add_term(const PauliString& p, double c) {
  if (p.weight() > k_) {
    throw ArgumentError("term " + p.to_string() + " exceeds locality " + std::to_string(k_));
  }
  terms_.add_term(p, c);
}

KLocalHamiltonian KLocalHamiltonian::traceless() const {
  KLocalHamiltonian out(n_qubits(), k_);
  for (const auto& [p, c] : terms_.terms())
    if (!p.is_identity()) out.add_term(p, c);
  return out;
}

HermitianMatrix KLocalHamiltonian::to_dense() const { return HermitianMatrix(terms_.to_dense()); }

std::vector<PauliString> coordinate_basis(int n_qubits, int k) {
  std::vector<PauliString> all = strings_up_to_weight(n_qubits, k);
  all.erase(all.begin());  // identity
  return all;
}

namespace {

void require_dense(int n, int cap, const char* what) {
  if (n > cap) throw ResourceError(std::string(what) + " is capped at " + std::to_string(cap) + " qubits");
}

Matrix dense_hamiltonian(int n, const std::vector<PauliString>& basis, const std::vector<double>& theta) {
  if (basis.size() != theta.size()) throw DimensionError("basis and coefficient counts differ");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix h = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.size(); ++i) add_pauli(h, basis[i], theta[i]);
  return h;
}

// Spectral data of e^H / tr e^H.
struct Thermal {
  EigenDecomposition eig;
  RealVector weights;  // Boltzmann weights p_j, summing to one
  double log_partition = 0.0;
  Matrix state;
};

Thermal thermal_from(const Matrix& h) {
  Thermal t;
  t.eig = eig_lapack(h);
  const double top = t.eig.values.maxCoeff();
  t.weights = (t.eig.values.array() - top).exp().matrix();
  const double z = t.weights.sum();
  t.weights /= z;
  t.log_partition = top + std::log(z);
  t.state = t.eig.vectors * t.weights.cast<Complex>().asDiagonal() * t.eig.vectors.adjoint();
  return t;
}

// Divided differences of p_j = e^{h_j} / Z.
RealMatrix divided_differences(const Thermal& t) {
  const Eigen::Index dim = t.weights.size();
  RealMatrix g(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index b = 0; b < dim; ++b) {
      const double dh = t.eig.values(a) - t.eig.values(b);
      if (std::abs(dh) > 1e-9) {
        g(a, b) = (t.weights(a) - t.weights(b)) / dh;
      } else {
        g(a, b) = 0.5 * (t.weights(a) + t.weights(b));
      }
    }
  return g;
}

// U^dagger P U for an unsigned Pauli string.
Matrix rotate_pauli(const PauliString& p, const Matrix& u) {
  Matrix pu(u.rows(), u.cols());
  for (Eigen::Index c = 0; c < u.cols(); ++c) pu.col(c) = apply_pauli(p, u.col(c));
  return u.adjoint() * pu;
}

}  // namespace

DensityMatrix thermal_state(const HermitianMatrix& h) {
  require_dense(particle_count(h.dim(), 2), kMaxDenseQubits, "thermal_state");
  return DensityMatrix(HermitianMatrix::symmetrized(thermal_from(h.matrix()).state));
}

DensityMatrix thermal_state(const KLocalHamiltonian& h) {
  require_dense(h.n_qubits(), kMaxDenseQubits, "thermal_state");
  return thermal_state(h.to_dense());
}

std::vector<double> moments(const Matrix& rho, const std::vector<PauliString>& basis) {
  const double dim = static_cast<double>(rho.rows());
  std::vector<double> eta(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) eta[i] = dim * pauli_coefficient(rho, basis[i]);
  return eta;
}

double ExponentialCoordinates::legendre_residual() const {
  double dot = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) dot += theta[i] * eta[i];
  return std::abs(massieu + potential - dot);
}

ExponentialCoordinates exponential_coordinates(const KLocalHamiltonian& h) {
  require_dense(h.n_qubits(), kMaxDenseQubits, "exponential_coordinates");
  ExponentialCoordinates c;
  c.basis = coordinate_basis(h.n_qubits(), h.locality());
  for (const auto& p : c.basis) c.theta.push_back(h.terms().coefficient(p));
  const Thermal t = thermal_from(dense_hamiltonian(h.n_qubits(), c.basis, c.theta));
  c.eta = moments(t.state, c.basis);
  c.massieu = t.log_partition;
  c.potential = -entropy_of_spectrum(t.weights);
  return c;
}

double massieu(int n_qubits, const std::vector<PauliString>& basis, const std::vector<double>& theta,
               std::vector<double>* gradient) {
  require_dense(n_qubits, kMaxDenseQubits, "massieu");
  const Thermal t = thermal_from(dense_hamiltonian(n_qubits, basis, theta));
  if (gradient) *gradient = moments(t.state, basis);
  return t.log_partition;
}

InfoProjection info_projection(const DensityMatrix& rho, int k, const InfoProjectionOptions& options) {
  const int n = rho.n_particles();
  if (rho.local_dim() != 2) throw ArgumentError("info_projection supports qubits only");
  require_dense(n, 8, "info_projection");
  if (k < 0 || k > n) throw ArgumentError("k must lie in [0, N]");

  const std::vector<PauliString> basis = coordinate_basis(n, k);
  const std::vector<double> target = moments(rho.matrix(), basis);
  const std::size_t m = basis.size();
  std::vector<double> theta(m, 0.0);

  auto dual = [&](const Thermal& t, const std::vector<double>& th) {
    double dot = 0.0;
    for (std::size_t i = 0; i < m; ++i) dot += th[i] * target[i];
    return t.log_partition - dot;
  };

  Thermal t = thermal_from(dense_hamiltonian(n, basis, theta));
  double value = dual(t, theta);
  double residual = 0.0;
  int iter = 0;
  bool converged = false;
  for (; iter <= options.max_iterations; ++iter) {
    const std::vector<double> eta = moments(t.state, basis);
    RealVector grad(static_cast<Eigen::Index>(m));
    residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      grad(static_cast<Eigen::Index>(i)) = eta[i] - target[i];
      residual = std::max(residual, std::abs(eta[i] - target[i]));
    }
    if (residual < options.tolerance) {
      converged = true;
      break;
    }
    if (iter == options.max_iterations || m == 0) break;

    // Hessian: Kubo-Mori covariance sum_ab G_ab conj(A_i)_ab (A_j)_ab - eta_i eta_j.
    const RealMatrix g = divided_differences(t);
    const Eigen::Index dim = g.rows();
    Matrix weighted(dim * dim, static_cast<Eigen::Index>(m));
    const RealMatrix root = g.cwiseMax(0.0).cwiseSqrt();
    for (std::size_t i = 0; i < m; ++i) {
      const Matrix a = rotate_pauli(basis[i], t.eig.vectors).cwiseProduct(root.cast<Complex>());
      weighted.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(a.data(), dim * dim);
    }
    RealVector eta_vec = Eigen::Map<const RealVector>(eta.data(), static_cast<Eigen::Index>(m));
    RealMatrix hess = (weighted.adjoint() * weighted).real() - eta_vec * eta_vec.transpose();

    // Levenberg-damped Newton step with backtracking on the dual objective.
    double mu = 1e-12 * std::max(1.0, hess.diagonal().maxCoeff());
    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      RealMatrix reg = hess;
      reg.diagonal().array() += mu;
      Eigen::LDLT<RealMatrix> ldlt(reg);
      RealVector step = -ldlt.solve(grad);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        mu *= 10.0;
        continue;
      }
      const double slope = grad.dot(step);
      double s = 1.0;
      for (int ls = 0; ls < 30; ++ls, s *= 0.5) {
        std::vector<double> trial(m);
        for (std::size_t i = 0; i < m; ++i) trial[i] = theta[i] + s * step(static_cast<Eigen::Index>(i));
        Thermal tt = thermal_from(dense_hamiltonian(n, basis, trial));
        const double tv = dual(tt, trial);
        if (tv <= value + 1e-4 * s * slope) {
          theta = std::move(trial);
          t = std::move(tt);
          value = tv;
          accepted = true;
          break;
        }
      }
      if (!accepted) mu = std::max(mu * 100.0, 1e-10);
    }
    if (!accepted) break;
  }

  InfoProjection out{DensityMatrix(HermitianMatrix::symmetrized(t.state)),
                     KLocalHamiltonian::from_coefficients(n, k, basis, theta), residual, iter, converged};
  return out;
}

double pythagorean_residual(const DensityMatrix& rho, const DensityMatrix& projection, const DensityMatrix& tau) {
  return std::abs(relative_entropy(rho, tau) - relative_entropy(rho, projection) -
                  relative_entropy(projection, tau));
}

double pythagorean_residual(const DensityMatrix& rho, int k, const DensityMatrix& tau) {
  return pythagorean_residual(rho, info_projection(rho, k).state, tau);
}

double overlap_bound(double dim) {
  if (!(dim >= 2.0)) throw ArgumentError("overlap bound needs D >= 2");
  return (dim - 1.0) / dim;
}

namespace {

double four_variable_value(double p_plus, double p_minus, double eta_plus, double eta_minus, double dim) {
  const double rest = -(eta_plus + eta_minus) / (dim - 2.0);
  const double top = std::max({eta_plus, eta_minus, rest});
  const double num = p_plus * std::exp(eta_plus - top) + p_minus * std::exp(eta_minus - top);
  const double den = std::exp(eta_plus - top) + std::exp(eta_minus - top) + (dim - 2.0) * std::exp(rest - top);
  return num / den;
}

}  // namespace

double four_variable_objective(double p_plus, double p_minus, double eta_plus, double eta_minus, double dim) {
  if (!(dim > 2.0)) throw ArgumentError("four-variable objective needs D > 2");
  if (p_plus < 0.0 || p_minus < 0.0 || p_plus + p_minus > 1.0 + 1e-12) {
    throw ArgumentError("need p+, p- >= 0 and p+ + p- <= 1");
  }
  const double scale = std::max({1.0, std::abs(eta_plus), std::abs(eta_minus)});
  if (std::abs(p_plus * eta_plus + p_minus * eta_minus) > 1e-9 * scale) {
    throw ArgumentError("constraint p+ eta+ + p- eta- = 0 violated");
  }
  return four_variable_value(p_plus, p_minus, eta_plus, eta_minus, dim);
}

double four_variable_reduced(double eta_plus, double eta_minus, double dim) {
  if (!(dim > 2.0)) throw ArgumentError("four-variable objective needs D > 2");
  if (eta_plus == eta_minus) {
    if (eta_plus != 0.0) throw ArgumentError("equal nonzero levels cannot satisfy the constraint");
    return 1.0 / dim;
  }
  if (eta_plus < 0.0 || eta_minus > 0.0) throw ArgumentError("need eta+ >= 0 >= eta-");
  const double p_minus = eta_plus / (eta_plus - eta_minus);
  return four_variable_value(1.0 - p_minus, p_minus, eta_plus, eta_minus, dim);
}

namespace {

using Point2 = std::array<double, 2>;

// Plain Nelder-Mead maximization in two variables.
Point2 nelder_mead_max(const std::function<double(const Point2&)>& f, Point2 start, double size, int max_evals) {
  std::array<Point2, 3> x{start, Point2{start[0] + size, start[1]}, Point2{start[0], start[1] + size}};
  std::array<double, 3> v{f(x[0]), f(x[1]), f(x[2])};
  int evals = 3;
  auto lerp = [](const Point2& a, const Point2& b, double t) {
    return Point2{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  while (evals < max_evals) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] > v[b]; });
    const int best = order[0];
    const int mid = order[1];
    const int worst = order[2];
    if (std::abs(v[best] - v[worst]) < 1e-15 &&
        std::hypot(x[best][0] - x[worst][0], x[best][1] - x[worst][1]) < 1e-10) {
      break;
    }
    const Point2 centroid{0.5 * (x[best][0] + x[mid][0]), 0.5 * (x[best][1] + x[mid][1])};
    const Point2 refl = lerp(centroid, x[worst], -1.0);
    const double fr = f(refl);
    ++evals;
    if (fr > v[best]) {
      const Point2 exp = lerp(centroid, x[worst], -2.0);
      const double fe = f(exp);
      ++evals;
      if (fe > fr) {
        x[worst] = exp;
        v[worst] = fe;
      } else {
        x[worst] = refl;
        v[worst] = fr;
      }
    } else if (fr > v[mid]) {
      x[worst] = refl;
      v[worst] = fr;
    } else {
      const Point2 con = lerp(centroid, x[worst], 0.5);
      const double fc = f(con);
      ++evals;
      if (fc > v[worst]) {
        x[worst] = con;
        v[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          x[i] = lerp(x[best], x[i], 0.5);
          v[i] = f(x[i]);
          ++evals;
        }
      }
    }
  }
  const auto it = std::max_element(v.begin(), v.end());
  return x[static_cast<std::size_t>(it - v.begin())];
}

}  // namespace

FourVariableMaximum maximize_four_variable(double dim, std::uint64_t seed, int restarts) {
  if (!(dim > 2.0)) throw ArgumentError("four-variable maximization needs D > 2");
  // eta+ = e^a, eta- = -e^b, clamped to keep the exponentials finite.
  auto f = [dim](const Point2& q) {
    const double a = std::clamp(q[0], -20.0, 12.0);
    const double b = std::clamp(q[1], -20.0, 12.0);
    return four_variable_reduced(std::exp(a), -std::exp(b), dim);
  };
  Rng rng(seed);
  std::uniform_real_distribution<double> start(-6.0, 5.0);
  FourVariableMaximum best;
  best.value = -1.0;
  for (int r = 0; r < restarts; ++r) {
    Point2 q = nelder_mead_max(f, Point2{start(rng), start(rng)}, 0.5, 2000);
    const double v = f(q);
    if (v > best.value) {
      best.value = v;
      best.eta_plus = std::exp(std::clamp(q[0], -20.0, 12.0));
      best.eta_minus = -std::exp(std::clamp(q[1], -20.0, 12.0));
      best.p_minus = best.eta_plus / (best.eta_plus - best.eta_minus);
      best.p_plus = 1.0 - best.p_minus;
    }
  }
  return best;
}

double thermal_fidelity(const PureState& target, const std::vector<PauliString>& basis,
                        const std::vector<double>& theta, std::vector<double>* gradient) {
  const int n = target.n_particles();
  require_dense(n, 8, "thermal_fidelity");
  const Thermal t = thermal_from(dense_hamiltonian(n, basis, theta));
  const Vector phi = t.eig.vectors.adjoint() * target.amplitudes();
  const double f = (t.weights.array() * phi.array().abs2()).sum();
  if (gradient) {
    // d/dtheta_i = tr[A_i U (G o phi phi^dagger) U^dagger] - f tr[tau A_i].
    const RealMatrix g = divided_differences(t);
    const Matrix inner = (phi * phi.adjoint()).cwiseProduct(g.cast<Complex>());
    const Matrix lifted = t.eig.vectors * inner * t.eig.vectors.adjoint();
    const std::vector<double> a = moments(lifted, basis);
    const std::vector<double> eta = moments(t.state, basis);
    gradient->resize(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) (*gradient)[i] = a[i] - f * eta[i];
  }
  return f;
}

namespace {

// Adam ascent; returns the best value seen and updates theta to its argmax.
double adam_ascent(const PureState& target, const std::vector<PauliString>& basis, std::vector<double>& theta,
                   const OverlapAscentOptions& options) {
  const std::size_t m = basis.size();
  std::vector<double> mom(m, 0.0);
  std::vector<double> vel(m, 0.0);
  std::vector<double> grad;
  std::vector<double> best_theta = theta;
  double best = -1.0;
  const double b1 = 0.9;
  const double b2 = 0.999;
  for (int it = 1; it <= options.iterations; ++it) {
    const double f = thermal_fidelity(target, basis, theta, &grad);
    if (f > best) {
      best = f;
      best_theta = theta;
    }
    const double c1 = 1.0 - std::pow(b1, it);
    const double c2 = 1.0 - std::pow(b2, it);
    for (std::size_t i = 0; i < m; ++i) {
      mom[i] = b1 * mom[i] + (1.0 - b1) * grad[i];
      vel[i] = b2 * vel[i] + (1.0 - b2) * grad[i] * grad[i];
      theta[i] += options.learning_rate * (mom[i] / c1) / (std::sqrt(vel[i] / c2) + 1e-12);
    }
  }
  const double last = thermal_fidelity(target, basis, theta);
  if (last > best) {
    best = last;
    best_theta = theta;
  }
  theta = std::move(best_theta);
  return best;
}

}  // namespace

OverlapAscentResult overlap_ascent_from(const PureState& target, int k, const KLocalHamiltonian& start,
                                        const OverlapAscentOptions& options) {
  const int n = target.n_particles();
  if (target.local_dim() != 2) throw ArgumentError("overlap_ascent supports qubits only");
  require_dense(n, 8, "overlap_ascent");
  if (k < 1 || k > n) throw ArgumentError("k must lie in [1, N]");
  if (start.n_qubits() != n) throw DimensionError("start Hamiltonian acts on the wrong qubit count");
  if (start.locality() > k) throw ArgumentError("start Hamiltonian is not k-local");
  const std::vector<PauliString> basis = coordinate_basis(n, k);
  std::vector<double> theta;
  for (const auto& p : basis) theta.push_back(start.terms().coefficient(p));
  const double value = adam_ascent(target, basis, theta, options);
  return OverlapAscentResult{value, KLocalHamiltonian::from_coefficients(n, k, basis, theta), {value}};
}

OverlapAscentResult overlap_ascent(const PureState& target, int k, const OverlapAscentOptions& options) {
  const int n = target.n_particles();
  if (target.local_dim() != 2) throw ArgumentError("overlap_ascent supports qubits only");
  require_dense(n, 8, "overlap_ascent");
  if (k < 1 || k > n) throw ArgumentError("k must lie in [1, N]");
  const std::vector<PauliString> basis = coordinate_basis(n, k);
  OverlapAscentResult result{-1.0, KLocalHamiltonian(n, k), {}};
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> normal(0.0, options.init_scale);
    std::vector<double> theta(basis.size());
    for (double& t : theta) t = normal(rng);
    const double value = adam_ascent(target, basis, theta, options);
    result.restart_values.push_back(value);
    if (value > result.best_fidelity) {
      result.best_fidelity = value;
      result.hamiltonian = KLocalHamiltonian::from_coefficients(n, k, basis, theta);
    }
  }
  return result;
}

}  // namespace kbody
