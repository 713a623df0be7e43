#include "mtorus/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "mtorus/numerics.hpp"

namespace mtorus {

namespace {

constexpr double kOrthTol = 1e-12;
constexpr double kClusterTol = 1e-10;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Best rational approximation p/q to x with q bounded; returns false when x
// is not resolved as rational at 1e-9 relative accuracy.
bool rationalize(double x, long long& p, long long& q) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(r);
    long long a = static_cast<long long>(fl);
    long long h2 = a * h1 + h0;
    long long k2 = a * k1 + k0;
    if (k2 > 1000000 || k2 <= 0) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::abs(x - approx) <= 1e-9 * std::max(1.0, std::abs(x))) {
      p = h1;
      q = k1;
      return p > 0;
    }
    double frac = r - fl;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return false;
}

}  // namespace

ManifoldSpec ManifoldSpec::circle(double rho) {
  require(rho > 0.0, "ManifoldSpec: circle radius must be positive");
  ManifoldSpec m;
  m.kind = BaseKind::Circle;
  m.radius = rho;
  m.dimension = 1;
  return m;
}

ManifoldSpec ManifoldSpec::rect_torus(double l1, double l2) {
  require(l1 > 0.0 && l2 > 0.0, "ManifoldSpec: torus periods must be positive");
  ManifoldSpec m;
  m.kind = BaseKind::RectTorus;
  m.period1 = l1;
  m.period2 = l2;
  m.dimension = 2;
  return m;
}

double ManifoldSpec::volume() const {
  return kind == BaseKind::Circle ? 2.0 * kPi * radius : period1 * period2;
}

IsometrySpec IsometrySpec::identity(const ManifoldSpec& base) {
  IsometrySpec s;
  s.kind = IsometryKind::Identity;
  s.base = base;
  return s;
}

IsometrySpec IsometrySpec::circle_reflection(const ManifoldSpec& base) {
  require(base.kind == BaseKind::Circle,
          "IsometrySpec: reflection requires a circle base");
  IsometrySpec s;
  s.kind = IsometryKind::CircleReflection;
  s.base = base;
  return s;
}

IsometrySpec IsometrySpec::circle_rotation(const ManifoldSpec& base, double angle) {
  require(base.kind == BaseKind::Circle,
          "IsometrySpec: rotation requires a circle base");
  IsometrySpec s;
  s.kind = IsometryKind::CircleRotation;
  s.angle = angle;
  s.base = base;
  return s;
}

IsometrySpec IsometrySpec::torus_swap_shift(const ManifoldSpec& base) {
  require(base.kind == BaseKind::RectTorus,
          "IsometrySpec: swap-shift requires a torus base");
  require(std::abs(base.period1 - 2.0 * kPi) <= 1e-12 &&
              std::abs(base.period2 - 2.0 * kPi) <= 1e-12,
          "IsometrySpec: swap-shift is an isometry only on the unit-circle torus");
  IsometrySpec s;
  s.kind = IsometryKind::TorusSwapShift;
  s.base = base;
  return s;
}

bool IsometrySpec::orientation_preserving() const {
  switch (kind) {
    case IsometryKind::Identity:
    case IsometryKind::CircleRotation:
      return true;
    case IsometryKind::CircleReflection:
    case IsometryKind::TorusSwapShift:
      return false;
  }
  return true;
}

MappingTorusSpec::MappingTorusSpec(const ManifoldSpec& b, const IsometrySpec& iso,
                                   double a)
    : base(b), isometry(iso), interval_length(a) {
  require(a > 0.0, "MappingTorusSpec: interval length must be positive");
  require(iso.base.kind == b.kind, "MappingTorusSpec: isometry base mismatch");
}

EigenBlock::EigenBlock(double nu2_, Matrix action_, Matrix inverse_action_)
    : nu2(nu2_),
      multiplicity(action_.rows()),
      action(std::move(action_)),
      inverse_action(std::move(inverse_action_)) {
  if (nu2 < 0.0) throw std::invalid_argument("EigenBlock: negative eigenvalue");
  if (orthogonality_defect(action) > kOrthTol)
    throw std::invalid_argument("EigenBlock: action is not orthogonal");
  if (max_abs(inverse_action - transpose(action)) > kOrthTol)
    throw std::invalid_argument("EigenBlock: inverse action is not the transpose");
}

namespace {

// Scalar pull-back on span{cos k theta, sin k theta}.
Matrix circle_scalar_action(IsometryKind kind, int k, double angle, bool inverse) {
  Matrix a(2, 2);
  switch (kind) {
    case IsometryKind::Identity:
      return Matrix::identity(2);
    case IsometryKind::CircleReflection:
      a(0, 0) = 1.0;
      a(1, 1) = -1.0;
      return a;
    case IsometryKind::CircleRotation: {
      double chi = inverse ? -angle : angle;
      double c = std::cos(k * chi), s = std::sin(k * chi);
      a(0, 0) = c;
      a(1, 0) = -s;
      a(0, 1) = s;
      a(1, 1) = c;
      return a;
    }
    default:
      throw std::invalid_argument("circle_scalar_action: not a circle isometry");
  }
}

}  // namespace

SpectrumStream circle_spectrum(double rho, int q, const IsometrySpec& isometry,
                               double cutoff) {
  require(rho > 0.0, "circle_spectrum: radius must be positive");
  require(cutoff >= 0.0 && cutoff <= 1e8,
          "circle_spectrum: cutoff outside the supported range");
  require(q == 0 || q == 1, "circle_spectrum: form degree out of range");
  require(isometry.base.kind == BaseKind::Circle,
          "circle_spectrum: isometry is not a circle isometry");

  // Pull-back of the coframe d theta: reflection reverses it.
  const double frame = (q == 1 && isometry.kind == IsometryKind::CircleReflection)
                           ? -1.0
                           : 1.0;

  SpectrumStream out;
  out.cutoff = cutoff;
  out.form_degree = q;
  out.base = ManifoldSpec::circle(rho);
  out.frame_mult = 1;
  {
    Matrix one(1, 1);
    one(0, 0) = frame;
    out.blocks.emplace_back(0.0, one, one);
  }
  for (int k = 1;; ++k) {
    double nu2 = static_cast<double>(k) * k / (rho * rho);
    if (nu2 > cutoff) break;
    Matrix a = frame * circle_scalar_action(isometry.kind, k, isometry.angle, false);
    Matrix ainv =
        frame * circle_scalar_action(isometry.kind, k, isometry.angle, true);
    out.blocks.emplace_back(nu2, a, ainv);
  }
  return out;
}

namespace {

struct LatticePoint {
  int m, n;
};

// Canonical representative of the +- pair {(m,n), (-m,-n)}.
bool canonical(int m, int n) { return m > 0 || (m == 0 && n > 0); }

// Real orthogonal pull-back of the swap-shift phi(z, w) = (w, -z) on the
// cos/sin basis of a torus shell:
//   phi* cos(m th + n ph) = (-1)^n cos(n th + m ph),
//   phi* sin(m th + n ph) = (-1)^n sin(n th + m ph),
// reduced to canonical index pairs (cos is even, sin is odd under +-).
Matrix swap_shift_shell_action(const std::vector<LatticePoint>& reps, bool inverse) {
  std::map<std::pair<int, int>, std::size_t> index;
  for (std::size_t i = 0; i < reps.size(); ++i)
    index[{reps[i].m, reps[i].n}] = i;
  Matrix a(2 * reps.size(), 2 * reps.size());
  for (std::size_t j = 0; j < reps.size(); ++j) {
    int m = reps[j].m, n = reps[j].n;
    // (phi^{-1})* carries (-1)^m instead of (-1)^n.
    double sign = ((inverse ? m : n) % 2 == 0) ? 1.0 : -1.0;
    int tm = n, tn = m;
    double flip = 1.0;
    if (!canonical(tm, tn)) {
      tm = -tm;
      tn = -tn;
      flip = -1.0;  // sin component only
    }
    std::size_t i = index.at({tm, tn});
    a(2 * i, 2 * j) = sign;
    a(2 * i + 1, 2 * j + 1) = sign * flip;
  }
  return a;
}

}  // namespace

SpectrumStream torus_spectrum(double l1, double l2, int q,
                              const IsometrySpec& isometry, double cutoff) {
  require(l1 > 0.0 && l2 > 0.0, "torus_spectrum: periods must be positive");
  require(cutoff >= 0.0 && cutoff <= 1e8,
          "torus_spectrum: cutoff outside the supported range");
  require(q >= 0 && q <= 2, "torus_spectrum: form degree out of range");
  require(isometry.base.kind == BaseKind::RectTorus,
          "torus_spectrum: isometry is not a torus isometry");
  const bool swap_shift = isometry.kind == IsometryKind::TorusSwapShift;
  if (swap_shift)
    require(std::abs(l1 - 2.0 * kPi) <= 1e-12 && std::abs(l2 - 2.0 * kPi) <= 1e-12,
            "torus_spectrum: swap-shift requires periods 2*pi");
  require(isometry.kind == IsometryKind::Identity || swap_shift,
          "torus_spectrum: unsupported torus isometry");

  const double w1 = 2.0 * kPi / l1;
  const double w2 = 2.0 * kPi / l2;

  // Shells are identified by an exact integer key so that lattice points
  // with equal nu2 always merge; floating tie-breaking is never used.
  long long p = 1, qq = 1;
  bool commensurable = rationalize((l2 / l1) * (l2 / l1), p, qq);
  auto shell_key = [&](int m, int n) -> std::pair<long long, long long> {
    if (commensurable)
      return {static_cast<long long>(m) * m * p + static_cast<long long>(n) * n * qq,
              0};
    return {static_cast<long long>(m) * m, static_cast<long long>(n) * n};
  };
  auto shell_value = [&](const std::pair<long long, long long>& key) {
    if (commensurable)
      return w2 * w2 * static_cast<double>(key.first) / static_cast<double>(qq);
    return w1 * w1 * static_cast<double>(key.first) +
           w2 * w2 * static_cast<double>(key.second);
  };

  std::map<std::pair<long long, long long>, std::vector<LatticePoint>> shells;
  int mmax = static_cast<int>(std::floor(std::sqrt(cutoff) / w1)) + 1;
  int nmax = static_cast<int>(std::floor(std::sqrt(cutoff) / w2)) + 1;
  for (int m = -mmax; m <= mmax; ++m)
    for (int n = -nmax; n <= nmax; ++n) {
      if (shell_value(shell_key(m, n)) > cutoff) continue;
      if (m == 0 && n == 0) {
        shells[shell_key(0, 0)].push_back({0, 0});
      } else if (canonical(m, n)) {
        shells[shell_key(m, n)].push_back({m, n});
      }
    }

  // Frame action on the parallel coframe {d theta, d phi}.
  Matrix frame1;
  double frame2_sign = 1.0;
  if (swap_shift) {
    frame1 = Matrix(2, 2);
    frame1(0, 1) = 1.0;
    frame1(1, 0) = 1.0;
    frame2_sign = -1.0;
  } else {
    frame1 = Matrix::identity(2);
  }

  SpectrumStream out;
  out.cutoff = cutoff;
  out.form_degree = q;
  out.base = ManifoldSpec::rect_torus(l1, l2);
  out.frame_mult = frame_multiplicity(out.base, q);
  for (const auto& [key, reps] : shells) {
    double nu2 = shell_value(key);
    Matrix a0, a0inv;
    if (!swap_shift) {
      std::size_t mult = (nu2 == 0.0) ? 1 : 2 * reps.size();
      a0 = Matrix::identity(mult);
      a0inv = a0;
    } else if (nu2 == 0.0) {
      a0 = Matrix::identity(1);
      a0inv = a0;
    } else {
      a0 = swap_shift_shell_action(reps, false);
      a0inv = swap_shift_shell_action(reps, true);
    }
    Matrix a, ainv;
    if (q == 0) {
      a = a0;
      ainv = a0inv;
    } else if (q == 1) {
      a = kronecker(a0, frame1);
      ainv = kronecker(a0inv, transpose(frame1));
    } else {
      a = frame2_sign * a0;
      ainv = frame2_sign * a0inv;
    }
    out.blocks.emplace_back(nu2, a, ainv);
  }
  std::sort(out.blocks.begin(), out.blocks.end(),
            [](const EigenBlock& x, const EigenBlock& y) { return x.nu2 < y.nu2; });
  return out;
}

SpectrumStream base_spectrum(const MappingTorusSpec& spec, int q, double cutoff) {
  if (spec.base.kind == BaseKind::Circle)
    return circle_spectrum(spec.base.radius, q, spec.isometry, cutoff);
  return torus_spectrum(spec.base.period1, spec.base.period2, q, spec.isometry,
                        cutoff);
}

SpectrumStream tilde_spectrum(const MappingTorusSpec& spec, int q, double cutoff) {
  const int dim = spec.base.dimension;
  std::vector<SpectrumStream> parts;
  for (int r : {q, q - 1})
    if (r >= 0 && r <= dim) parts.push_back(base_spectrum(spec, r, cutoff));
  require(!parts.empty(), "tilde_spectrum: degree out of range");

  // Blocks from the two degrees sit on identical scalar shells, so equal
  // nu2 values are bit-identical; merge them block-diagonally.
  std::map<double, std::vector<const EigenBlock*>> merged;
  for (const auto& part : parts)
    for (const auto& b : part.blocks) merged[b.nu2].push_back(&b);

  SpectrumStream out;
  out.cutoff = cutoff;
  out.form_degree = q;
  out.base = spec.base;
  out.frame_mult = frame_multiplicity(spec.base, q) +
                   frame_multiplicity(spec.base, q - 1);
  for (const auto& [nu2, blocks] : merged) {
    std::size_t total = 0;
    for (const auto* b : blocks) total += b->multiplicity;
    Matrix a(total, total), ainv(total, total);
    std::size_t off = 0;
    for (const auto* b : blocks) {
      for (std::size_t i = 0; i < b->multiplicity; ++i)
        for (std::size_t j = 0; j < b->multiplicity; ++j) {
          a(off + i, off + j) = b->action(i, j);
          ainv(off + i, off + j) = b->inverse_action(i, j);
        }
      off += b->multiplicity;
    }
    out.blocks.emplace_back(nu2, a, ainv);
  }
  return out;
}

namespace {

int count_fixed(const Matrix& a) {
  if (a.empty()) return 0;
  Matrix sym = Matrix::identity(a.rows()) - 0.5 * (a + transpose(a));
  int fixed = 0;
  for (double ev : symmetric_eigenvalues(sym))
    if (std::abs(ev) <= kClusterTol) ++fixed;
  return fixed;
}

Matrix moved_part(const Matrix& a) {
  if (a.empty()) return Matrix();
  Matrix sym = Matrix::identity(a.rows()) - 0.5 * (a + transpose(a));
  std::vector<double> kappa;
  for (double ev : symmetric_eigenvalues(sym))
    if (ev > kClusterTol) kappa.push_back(ev);
  return Matrix::diagonal(kappa);
}

}  // namespace

HarmonicActionSet harmonic_actions(const MappingTorusSpec& spec) {
  HarmonicActionSet h;
  h.dimension = spec.base.dimension;
  Matrix one = Matrix::identity(1);
  if (spec.base.kind == BaseKind::Circle) {
    Matrix h1(1, 1);
    h1(0, 0) =
        spec.isometry.kind == IsometryKind::CircleReflection ? -1.0 : 1.0;
    h.action = {one, h1};
    h.betti = {1, 1};
  } else {
    Matrix h1, h2(1, 1);
    if (spec.isometry.kind == IsometryKind::TorusSwapShift) {
      h1 = Matrix(2, 2);
      h1(0, 1) = 1.0;
      h1(1, 0) = 1.0;
      h2(0, 0) = -1.0;
    } else {
      h1 = Matrix::identity(2);
      h2(0, 0) = 1.0;
    }
    h.action = {one, h1, h2};
    h.betti = {1, 2, 1};
  }
  for (const Matrix& a : h.action) {
    h.fixed_dim.push_back(count_fixed(a));
    h.moved_block.push_back(moved_part(a));
  }
  return h;
}

std::vector<std::pair<int, int>> fixed_dims(const HarmonicActionSet& h) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t q = 0; q < h.action.size(); ++q)
    out.emplace_back(h.betti[q], h.fixed_dim[q]);
  return out;
}

std::size_t frame_multiplicity(const ManifoldSpec& base, int q) {
  int d = base.dimension;
  if (q < 0 || q > d) return 0;
  std::size_t num = 1;
  for (int i = 0; i < q; ++i) num = num * (d - i) / (i + 1);
  return num;
}

}  // namespace mtorus
