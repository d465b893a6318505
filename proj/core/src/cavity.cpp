#include "billiard/cavity.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numbers>

#include <lapacke.h>

#include "billiard/error.hpp"
#include "billiard/io.hpp"

namespace billiard {

namespace {

constexpr double kPi = std::numbers::pi;

double cosine_norm(int m, double length) { return std::sqrt((m == 0 ? 1.0 : 2.0) / length); }

}  // namespace

void BasisSpec::validate() const {
  if (m_max < 1 || n_max < 1) throw InvalidInput("basis needs m_max >= 1 and n_max >= 1");
  if (k_keep < 1 || k_keep > size()) {
    throw InvalidInput("k_keep must lie in [1, m_max * n_max], got " + std::to_string(k_keep));
  }
}

// Closed forms, with sigma = (-1)^(n + n'). Off the diagonal:
//   d1 = n n' (sigma - 1) / (n'^2 - n^2)
//   d2 = sigma n n' / (n'^2 - n^2)
//   d4 = n n' (sigma - 1)(n^2 + n'^2) / (n^2 - n'^2)^2
//   d5 = 2 sigma n n' (n^2 + n'^2) / (n^2 - n'^2)^2
// and on it d1 = 0, d2 = -1/4, d3 = n^2 pi^2 / 2, d4 = n^2 pi^2 / 4,
// d5 = n^2 pi^2 / 6 + 1/4. The sign factor of d2 and the 1/4 on the d5
// diagonal are easy to get wrong; the quadrature tests pin both.
VIntegralTables build_v_tables(int n_max) {
  if (n_max < 1) throw InvalidInput("n_max must be >= 1");
  VIntegralTables t;
  for (auto* d : {&t.d1, &t.d2, &t.d3, &t.d4, &t.d5}) d->setZero(n_max, n_max);
  for (int i = 0; i < n_max; ++i) {
    const double n = i + 1;
    t.d2(i, i) = -0.25;
    t.d3(i, i) = n * n * kPi * kPi / 2.0;
    t.d4(i, i) = n * n * kPi * kPi / 4.0;
    t.d5(i, i) = n * n * kPi * kPi / 6.0 + 0.25;
    for (int j = 0; j < n_max; ++j) {
      if (i == j) continue;
      const double np = j + 1;
      const double sigma = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      const double diff = np * np - n * n;
      const double sum = n * n + np * np;
      t.d1(i, j) = n * np * (sigma - 1.0) / diff;
      t.d2(i, j) = sigma * n * np / diff;
      t.d4(i, j) = n * np * (sigma - 1.0) * sum / (diff * diff);
      t.d5(i, j) = 2.0 * sigma * n * np * sum / (diff * diff);
    }
  }
  return t;
}

Eigen::MatrixXd assemble_hamiltonian(const BoundaryProfile& profile, const BasisSpec& basis,
                                     const AssemblyOptions& options) {
  if (basis.m_max < 1 || basis.n_max < 1) throw InvalidInput("basis needs m_max >= 1 and n_max >= 1");
  if (profile.grid_size() < 2 * basis.m_max) {
    throw InvalidInput("profile grid size must be at least 2 * m_max");
  }
  const ProfileSamples s =
      options.transform.grid == GridKind::Midpoint ? profile.samples() : profile.sample(options.transform.grid);
  for (double j : s.J) {
    if (!(j > 0.0)) throw InvalidInput("assembly needs J > 0 on the whole grid");
  }

  const std::size_t npts = s.J.size();
  std::vector<double> ell(npts), ell2(npts), q_ell(npts), g5(npts), g6(npts), g7(npts), q_over_j(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    const double j = s.J[i];
    const double qu = s.Qu[i];
    const double ju = s.Ju[i];
    ell[i] = ju / (2.0 * j);  // (log J)' / 2
    ell2[i] = ell[i] * ell[i];
    q_ell[i] = qu * ell[i] / j;
    g5[i] = (1.0 + qu * qu) / (j * j);
    g6[i] = 2.0 * qu * ju / (j * j);
    g7[i] = ju * ju / (j * j);
    q_over_j[i] = qu / j;
  }

  // Products of basis functions reduce to single cosines/sines of index
  // |m - m'| and m + m', so one transform per weight function covers every
  // (m, m') pair.
  const double length = profile.length();
  const int count = 2 * basis.m_max - 1;
  const auto& opt = options.transform;
  const auto c_ell2 = fft_cosine_integrals(ell2, length, count, opt);
  const auto c_qell = fft_cosine_integrals(q_ell, length, count, opt);
  const auto c_g5 = fft_cosine_integrals(g5, length, count, opt);
  const auto c_g6 = fft_cosine_integrals(g6, length, count, opt);
  const auto c_g7 = fft_cosine_integrals(g7, length, count, opt);
  const auto s_ell = fft_sine_integrals(ell, length, count, opt);
  const auto s_q = fft_sine_integrals(q_over_j, length, count, opt);

  const int mm = basis.m_max;
  std::vector<double> norm(mm), omega(mm);
  for (int m = 0; m < mm; ++m) {
    norm[m] = cosine_norm(m, length);
    omega[m] = m * kPi / length;
  }
  // \int f c_m c_m'
  auto cc = [&](const std::vector<double>& c, int m, int mp) {
    return norm[m] * norm[mp] * 0.5 * (c[std::abs(m - mp)] + c[m + mp]);
  };
  // \int f c_m' c_m'  (derivative on the first factor)
  auto sc = [&](const std::vector<double>& sn, int m, int mp) {
    const double diff = m >= mp ? sn[m - mp] : -sn[mp - m];
    return -norm[m] * norm[mp] * omega[m] * 0.5 * (sn[m + mp] + diff);
  };

  Eigen::MatrixXd k1(mm, mm), uq(mm, mm), uj(mm, mm), G5(mm, mm), G6(mm, mm), G7(mm, mm);
  for (int m = 0; m < mm; ++m) {
    for (int mp = 0; mp < mm; ++mp) {
      // \int J ((c_m / sqrt J)')((c_m' / sqrt J)') du
      k1(m, mp) = (m == mp ? omega[m] * omega[m] : 0.0) - sc(s_ell, m, mp) - sc(s_ell, mp, m) + cc(c_ell2, m, mp);
      // \int Q_u (c_m / sqrt J)' c_m' / sqrt J du, and the J_u analogue
      uq(m, mp) = sc(s_q, m, mp) - cc(c_qell, m, mp);
      uj(m, mp) = 2.0 * sc(s_ell, m, mp) - 2.0 * cc(c_ell2, m, mp);
      G5(m, mp) = cc(c_g5, m, mp);
      G6(m, mp) = cc(c_g6, m, mp);
      G7(m, mp) = cc(c_g7, m, mp);
    }
  }

  // With s_n = sqrt(2) S_n the normalised v-integrals are twice the raw tables.
  const VIntegralTables d = build_v_tables(basis.n_max);
  const double cross = options.inject_cross_term_fault ? 2.0 : -2.0;
  const Eigen::MatrixXd uqt = uq.transpose();
  const Eigen::MatrixXd ujt = uj.transpose();

  const int size = basis.size();
  Eigen::MatrixXd h(size, size);
  for (int i = 0; i < basis.n_max; ++i) {
    for (int j = 0; j < basis.n_max; ++j) {
      auto block = h.block(i * mm, j * mm, mm, mm);
      block = cross * (d.d1(i, j) * uq + d.d2(i, j) * uj + d.d1(j, i) * uqt + d.d2(j, i) * ujt) +
              2.0 * (d.d3(i, j) * G5 + d.d4(i, j) * G6 + d.d5(i, j) * G7);
      if (i == j) block += k1;
    }
  }
  if (options.symmetrize) {
    const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
    h = sym;
  }
  return h;
}

CavitySolution::CavitySolution(BoundaryProfile profile, BasisSpec basis, Eigen::VectorXd energies,
                               Eigen::MatrixXd coefficients)
    : profile_(std::move(profile)),
      basis_(basis),
      energies_(std::move(energies)),
      coefficients_(std::move(coefficients)) {
  if (coefficients_.rows() != basis_.size() || coefficients_.cols() != energies_.size()) {
    throw InvalidInput("cavity solution shape does not match its basis");
  }
}

double CavitySolution::trusted_k_max() const noexcept {
  return energies_.size() == 0 ? 0.0 : std::sqrt(std::max(0.0, energies_[energies_.size() - 1]) / 2.0);
}

namespace {

// Returns false (leaving `vectors` unspecified) when dsyevd reports failure
// or produces non-finite output.
bool lapack_eigensolve(const Eigen::MatrixXd& h, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  vectors = h;  // column-major, overwritten by eigenvectors
  values.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, vectors.data(), n, values.data());
  return info == 0 && vectors.allFinite() && values.allFinite();
}

}  // namespace

bool lapack_eigensolver_healthy() {
  static const bool healthy = [] {
    const int n = 96;
    Eigen::MatrixXd h(n, n);
    // Deterministic symmetric test matrix with a spread spectrum.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double v = std::sin(0.37 * (i + 1) * (j + 2)) + (i == j ? 0.1 * i : 0.0);
        h(i, j) = v;
        h(j, i) = v;
      }
    }
    Eigen::VectorXd w;
    Eigen::MatrixXd v;
    if (!lapack_eigensolve(h, w, v)) return false;
    const double residual = (h * v - v * w.asDiagonal()).cwiseAbs().maxCoeff();
    const double orth = (v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    return residual < 1e-10 * h.cwiseAbs().maxCoeff() * n && orth < 1e-10;
  }();
  return healthy;
}

CavitySolution solve_cavity(const BoundaryProfile& profile, const Eigen::MatrixXd& hamiltonian,
                            const BasisSpec& basis, EigenBackend backend) {
  basis.validate();
  const int n = basis.size();
  if (hamiltonian.rows() != n || hamiltonian.cols() != n) {
    throw InvalidInput("Hamiltonian shape does not match the basis");
  }
  if (backend == EigenBackend::Auto) {
    static const bool warned = [] {
      if (!lapack_eigensolver_healthy()) {
        std::clog << "billiard: LAPACK dsyevd failed its accuracy probe, using the Eigen eigensolver "
                     "(for OpenBLAS try OPENBLAS_CORETYPE=Haswell)\n";
      }
      return true;
    }();
    (void)warned;
    backend = lapack_eigensolver_healthy() ? EigenBackend::Lapack : EigenBackend::Eigen;
  }

  Eigen::VectorXd w;
  Eigen::MatrixXd a;
  if (backend == EigenBackend::Lapack) {
    if (!lapack_eigensolve(hamiltonian, w, a)) throw NumericalError("dsyevd failed");
  } else {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hamiltonian);
    if (eig.info() != Eigen::Success) throw NumericalError("Eigen eigensolver failed to converge");
    w = eig.eigenvalues();
    a = eig.eigenvectors();
  }

  const int keep = basis.k_keep;
  Eigen::VectorXd energies = w.head(keep);
  Eigen::MatrixXd vectors = a.leftCols(keep);
  for (int k = 0; k < keep; ++k) {
    Eigen::Index arg;
    vectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, k) < 0.0) vectors.col(k) *= -1.0;
  }
  if (energies.minCoeff() <= 0.0) {
    std::clog << "billiard: warning: non-positive cavity eigenvalue " << energies.minCoeff()
              << " (assembly error?)\n";
  }
  return CavitySolution(profile, basis, std::move(energies), std::move(vectors));
}

CavitySolution solve_cavity(const BoundaryProfile& profile, const BasisSpec& basis, const AssemblyOptions& options,
                            EigenBackend backend) {
  basis.validate();
  return solve_cavity(profile, assemble_hamiltonian(profile, basis, options), basis, backend);
}

std::vector<double> eval_wavefunction(const CavitySolution& solution, int k, std::span<const Point> points) {
  if (k < 0 || k >= solution.states()) throw InvalidInput("eigenfunction index out of range");
  const auto& profile = solution.profile();
  const auto& basis = solution.basis();
  const double length = profile.length();
  const auto coeff = solution.coefficients().col(k);

  std::vector<double> out;
  out.reserve(points.size());
  std::vector<double> c(basis.m_max), sv(basis.n_max);
  for (const Point& p : points) {
    if (!profile.contains(p.x, p.y)) {
      throw InvalidInput("point (" + format_double(p.x) + ", " + format_double(p.y) + ") lies outside the cavity");
    }
    const double u = std::clamp(p.x, 0.0, length);
    const double j = profile.width(u);
    const double v = std::clamp((p.y - profile.lower(u)) / j, 0.0, 1.0);
    for (int m = 0; m < basis.m_max; ++m) c[m] = cosine_norm(m, length) * std::cos(m * kPi * u / length);
    for (int n = 1; n <= basis.n_max; ++n) sv[n - 1] = std::sqrt(2.0) * std::sin(n * kPi * v);
    double sum = 0.0;
    for (int n = 1; n <= basis.n_max; ++n) {
      double inner = 0.0;
      for (int m = 0; m < basis.m_max; ++m) inner += coeff[basis.index(m, n)] * c[m];
      sum += inner * sv[n - 1];
    }
    out.push_back(sum / std::sqrt(j));
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'B', 'I', 'L', 'L', 'C', 'A', 'V', '1'};

}  // namespace

void save_solution(const CavitySolution& solution, const std::filesystem::path& energies_csv,
                   const std::filesystem::path& coefficients_bin) {
  {
    std::ofstream out(energies_csv);
    if (!out) throw InvalidInput("cannot write " + energies_csv.string());
    out << "k,E\n";
    for (int k = 0; k < solution.states(); ++k) out << k << ',' << format_double(solution.energies()[k]) << '\n';
  }
  std::ofstream out(coefficients_bin, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + coefficients_bin.string());
  const auto& b = solution.basis();
  const std::int32_t header[3] = {b.m_max, b.n_max, b.k_keep};
  const double length = solution.profile().length();
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(&length), sizeof(length));
  const auto& c = solution.coefficients();
  out.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
  if (!out) throw NumericalError("failed writing " + coefficients_bin.string());
}

CavitySolution load_solution(const BoundaryProfile& profile, const std::filesystem::path& energies_csv,
                             const std::filesystem::path& coefficients_bin) {
  std::ifstream in(coefficients_bin, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + coefficients_bin.string());
  char magic[8];
  std::int32_t header[3];
  double length = 0.0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  in.read(reinterpret_cast<char*>(&length), sizeof(length));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw NumericalError(coefficients_bin.string() + ": not a cavity coefficient file");
  }
  if (length != profile.length()) throw InvalidInput("cached solution length does not match the profile");
  BasisSpec basis{header[0], header[1], header[2]};
  basis.validate();
  Eigen::MatrixXd coefficients(basis.size(), basis.k_keep);
  in.read(reinterpret_cast<char*>(coefficients.data()),
          static_cast<std::streamsize>(coefficients.size() * sizeof(double)));
  if (!in) throw NumericalError(coefficients_bin.string() + ": truncated coefficient data");

  const CsvTable table = read_csv(energies_csv);
  const auto& e = table.column("E");
  if (static_cast<int>(e.size()) != basis.k_keep) throw NumericalError("energy and coefficient files disagree");
  Eigen::VectorXd energies = Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(e.size()));
  return CavitySolution(profile, basis, std::move(energies), std::move(coefficients));
}

}  // namespace billiard
