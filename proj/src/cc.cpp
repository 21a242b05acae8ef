/*
 * Copyright 2026 The qedcc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qedcc/cc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "qedcc/errors.hpp"
#include "qedcc/fock.hpp"

namespace qedcc::cc {
namespace {

template <typename S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double from_complex(const Complex& z) { return z.real(); }
  static double real_part(double x) { return x; }
  static double imag_part(double) { return 0.0; }
  static Complex to_complex(double x) { return Complex(x, 0.0); }
};

template <>
struct ScalarTraits<Complex> {
  static Complex from_complex(const Complex& z) { return z; }
  static double real_part(const Complex& z) { return z.real(); }
  static double imag_part(const Complex& z) { return z.imag(); }
  static Complex to_complex(const Complex& z) { return z; }
};

// Dense rank-4 storage keeps n^4 scalars; cap well below the point where a
// single tensor would exceed roughly a gigabyte.
constexpr std::size_t kMaxMaterializedLevels = 90;
constexpr double kDenominatorFloor = 1e-8;

struct Materialized {
  std::size_t n = 0;
  Matrix h;
  Tensor4 v;
  bool real_valued = true;
  double e_ref_work = 0.0;  // reference expectation of the channel sum
};

Materialized materialize(const ModelSystem& system, const ChannelSet& channels) {
  const std::size_t n = system.n_levels();
  if (n > kMaxMaterializedLevels) {
    std::ostringstream msg;
    msg << "cannot materialize a " << n << "-level working tensor (cap "
        << kMaxMaterializedLevels << " levels)";
    throw Error(ErrorKind::capacity, msg.str());
  }
  WorkingHamiltonian wh(system, channels);

  Materialized mat;
  mat.n = n;
  mat.h = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  mat.v = Tensor4(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      mat.h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = wh.one_body(p, q);
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
          mat.v(p, q, r, s) = wh.two_body(p, q, r, s);
        }
      }
    }
  }
  mat.real_valued = true;
  for (Eigen::Index idx = 0; idx < mat.h.size() && mat.real_valued; ++idx) {
    if (mat.h.data()[idx].imag() != 0.0) mat.real_valued = false;
  }
  for (std::size_t idx = 0; idx < mat.v.data().size() && mat.real_valued; ++idx) {
    if (mat.v.data()[idx].imag() != 0.0) mat.real_valued = false;
  }

  Complex e_ref(0.0, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = system.levels[k].occupied_in_reference ? system.levels[k].occupancy : 0.0;
    if (fk == 0.0) continue;
    e_ref += fk * mat.h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t l = 0; l < n; ++l) {
      const double fl = system.levels[l].occupied_in_reference ? system.levels[l].occupancy : 0.0;
      if (fl == 0.0) continue;
      e_ref += 0.5 * fk * fl * mat.v(k, l, k, l);
    }
  }
  mat.e_ref_work = e_ref.real();
  return mat;
}

void check_solvable(const ModelSystem& system) {
  ValidationReport report = validate(system);
  if (!report.ok()) {
    throw Error(ErrorKind::structural, "system failed validation: " + report.to_string());
  }
  if (system.occupied_indices().empty()) {
    throw Error(ErrorKind::configuration, "no occupied levels in the reference");
  }
  if (system.positive_virtual_indices().empty()) {
    throw Error(ErrorKind::configuration, "no positive-sector virtual levels");
  }
  for (const SpinorLevel& level : system.levels) {
    if (level.occupied_in_reference && std::abs(level.occupancy - 1.0) > 1e-12) {
      throw Error(ErrorKind::configuration,
                  "closed-shell solver requires unit occupancy on occupied levels");
    }
  }
}

void check_options(const SolverOptions& options) {
  if (options.max_iterations < 1) {
    throw Error(ErrorKind::argument, "max_iterations must be at least 1");
  }
  if (!(options.damping >= 0.0) || options.damping >= 1.0) {
    throw Error(ErrorKind::argument, "damping must lie in [0, 1)");
  }
  if (!(options.residual_tolerance > 0.0) || !(options.energy_tolerance > 0.0)) {
    throw Error(ErrorKind::argument, "tolerances must be positive");
  }
  if (options.level_shift < 0.0) {
    throw Error(ErrorKind::argument, "level_shift must be non-negative");
  }
}

double shifted(double d, double level_shift) {
  return level_shift == 0.0 ? d : d + std::copysign(level_shift, d);
}

// Closed-shell amplitude engine over a materialized channel sum. The scalar
// type is double when every working matrix element is exactly real (the
// common case for the bundled fixtures) and complex otherwise; both
// instantiations run the same contraction kernels.
template <typename S>
class Engine {
 public:
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using RowMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Traits = ScalarTraits<S>;

  Engine(const ModelSystem& system, const Materialized& mat, bool include_pairs,
         bool with_singles)
      : system_(&system), with_singles_(with_singles), n_(mat.n) {
    occ_ = system.occupied_indices();
    vrt_ = system.positive_virtual_indices();
    if (include_pairs) {
      const auto negatives = system.negative_indices();
      vrt_.insert(vrt_.end(), negatives.begin(), negatives.end());
    }
    no_ = occ_.size();
    nv_ = vrt_.size();
    vneg_.assign(nv_, false);
    for (std::size_t a = 0; a < nv_; ++a) {
      vneg_[a] = system.levels[vrt_[a]].sector == Sector::negative;
    }

    h_ = Mat::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t p = 0; p < n_; ++p) {
      for (std::size_t q = 0; q < n_; ++q) {
        h_(p, q) = Traits::from_complex(
            mat.h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)));
      }
    }
    v_.resize(mat.v.data().size());
    for (std::size_t idx = 0; idx < v_.size(); ++idx) {
      v_[idx] = Traits::from_complex(mat.v.data()[idx]);
    }
    e_ref_work_ = mat.e_ref_work;

    occupancy_.assign(n_, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
      occupancy_[k] = system.levels[k].occupied_in_reference ? system.levels[k].occupancy : 0.0;
    }

    f_ = fock_of(h_, v_);
    d_occ_.resize(no_);
    d_vrt_.resize(nv_);
    for (std::size_t i = 0; i < no_; ++i) d_occ_[i] = Traits::real_part(f_(occ_[i], occ_[i]));
    for (std::size_t a = 0; a < nv_; ++a) d_vrt_[a] = Traits::real_part(f_(vrt_[a], vrt_[a]));

    // canonical pair index lists
    op_idx_.assign(no_ * no_, -1);
    for (std::size_t i = 0; i < no_; ++i) {
      for (std::size_t j = i + 1; j < no_; ++j) {
        op_idx_[i * no_ + j] = static_cast<int>(opairs_.size());
        opairs_.emplace_back(i, j);
      }
    }
    vp_idx_.assign(nv_ * nv_, -1);
    for (std::size_t a = 0; a < nv_; ++a) {
      for (std::size_t b = a + 1; b < nv_; ++b) {
        vp_idx_[a * nv_ + b] = static_cast<int>(vpairs_.size());
        vpairs_.emplace_back(a, b);
      }
    }

    T_ = Mat::Zero(static_cast<Eigen::Index>(no_ * nv_), static_cast<Eigen::Index>(no_ * nv_));
    T1_ = Mat::Zero(static_cast<Eigen::Index>(no_), static_cast<Eigen::Index>(nv_));
    refresh_blocks();
  }

  std::size_t no() const { return no_; }
  std::size_t nv() const { return nv_; }
  const std::vector<std::size_t>& occupied() const { return occ_; }
  const std::vector<std::size_t>& virtuals() const { return vrt_; }

  void set_amplitudes(const Amplitudes& amps) {
    for (std::size_t i = 0; i < no_; ++i) {
      for (std::size_t a = 0; a < nv_; ++a) {
        auto it = amps.t1.find({occ_[i], vrt_[a]});
        T1_(i, a) = it == amps.t1.end() ? S(0) : Traits::from_complex(it->second);
        for (std::size_t j = 0; j < no_; ++j) {
          for (std::size_t b = 0; b < nv_; ++b) {
            T_(i * nv_ + a, j * nv_ + b) =
                Traits::from_complex(amps.get_t2(occ_[i], occ_[j], vrt_[a], vrt_[b]));
          }
        }
      }
    }
    refresh_blocks();
  }

  // Rebuilds the contraction blocks; when singles are active and nonzero the
  // one- and two-body operators are first similarity-transformed by the
  // singles cluster (exactly), which removes every explicit T1 term from the
  // amplitude equations.
  void refresh_blocks() {
    const bool dressed =
        with_singles_ && T1_.size() > 0 && T1_.cwiseAbs().maxCoeff() > 0.0;
    if (!dressed) {
      build_blocks(h_, v_);
      v_cur_ = &v_;
      return;
    }
    Mat u = Mat::Identity(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    Mat w = Mat::Identity(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < no_; ++i) {
      for (std::size_t a = 0; a < nv_; ++a) {
        u(vrt_[a], occ_[i]) -= T1_(i, a);
        w(occ_[i], vrt_[a]) += T1_(i, a);
      }
    }
    hd_ = u * h_ * w.transpose();
    vd_ = v_;
    transform_axis(vd_, u, 0);
    transform_axis(vd_, u, 1);
    transform_axis(vd_, w, 2);
    transform_axis(vd_, w, 3);
    build_blocks(hd_, vd_);
    v_cur_ = &vd_;
  }

  // Residual of the doubles (and singles) amplitude equations at the current
  // amplitudes; returns the max-norm over all residual entries.
  double compute_residuals() {
    const Eigen::Index ov = static_cast<Eigen::Index>(no_ * nv_);
    const Mat chi = T_ * G_;
    const Mat ty = T_ * Y_;
    const Mat m2 = ty * T_.transpose();

    const Eigen::Index po = static_cast<Eigen::Index>(opairs_.size());
    const Eigen::Index pv = static_cast<Eigen::Index>(vpairs_.size());
    Mat tp = Mat::Zero(po, pv);
    for (Eigen::Index r = 0; r < po; ++r) {
      const auto [i, j] = opairs_[static_cast<std::size_t>(r)];
      for (Eigen::Index c = 0; c < pv; ++c) {
        const auto [a, b] = vpairs_[static_cast<std::size_t>(c)];
        tp(r, c) = T_(i * nv_ + a, j * nv_ + b);
      }
    }
    Mat rp = tp * Vpp_ + Voo_ * tp;
    if (po > 0 && pv > 0) rp += (tp * Vx_) * tp;

    // hole-hole and particle-particle dressings of the quadratic terms
    Mat fh = Mat::Zero(static_cast<Eigen::Index>(no_), static_cast<Eigen::Index>(no_));
    for (std::size_t k = 0; k < no_; ++k) {
      for (std::size_t j = 0; j < no_; ++j) {
        S acc(0);
        for (std::size_t c = 0; c < nv_; ++c) {
          acc += Y_.row(k * nv_ + c).cwiseProduct(T_.row(j * nv_ + c)).sum();
        }
        fh(k, j) = S(0.5) * acc;
      }
    }
    Mat fp = Mat::Zero(static_cast<Eigen::Index>(nv_), static_cast<Eigen::Index>(nv_));
    for (std::size_t b = 0; b < nv_; ++b) {
      for (std::size_t c = 0; c < nv_; ++c) {
        S acc(0);
        for (std::size_t k = 0; k < no_; ++k) {
          acc += T_.row(k * nv_ + b).cwiseProduct(Y_.row(k * nv_ + c)).sum();
        }
        fp(b, c) = S(-0.5) * acc;
      }
    }

    R2_ = Mat::Zero(ov, ov);
    double resmax = 0.0;
    for (const auto& [i, j] : opairs_) {
      for (const auto& [a, b] : vpairs_) {
        const std::size_t ia = i * nv_ + a;
        const std::size_t ib = i * nv_ + b;
        const std::size_t ja = j * nv_ + a;
        const std::size_t jb = j * nv_ + b;

        S val = Dov_(ia, jb);
        val += chi(ia, jb) - chi(ja, ib) - chi(ib, ja) + chi(jb, ia);
        val += m2(ia, jb) - m2(ja, ib);
        val += rp(op_idx_[i * no_ + j], vp_idx_[a * nv_ + b]);
        for (std::size_t c = 0; c < nv_; ++c) {
          val += T_(ia, j * nv_ + c) * fvv_(b, c) - T_(ib, j * nv_ + c) * fvv_(a, c);
          val += T_(ia, j * nv_ + c) * fp(b, c) - T_(ib, j * nv_ + c) * fp(a, c);
        }
        for (std::size_t k = 0; k < no_; ++k) {
          val -= foo_(k, j) * T_(ia, k * nv_ + b) - foo_(k, i) * T_(ja, k * nv_ + b);
          val -= T_(ia, k * nv_ + b) * fh(k, j) - T_(ja, k * nv_ + b) * fh(k, i);
        }

        R2_(ia, jb) = val;
        R2_(ja, ib) = -val;
        R2_(ib, ja) = -val;
        R2_(jb, ia) = val;
        resmax = std::max(resmax, std::abs(val));
      }
    }

    if (with_singles_) {
      const std::vector<S>& v = *v_cur_;
      R1_ = Mat::Zero(static_cast<Eigen::Index>(no_), static_cast<Eigen::Index>(nv_));
      for (std::size_t i = 0; i < no_; ++i) {
        for (std::size_t a = 0; a < nv_; ++a) {
          S val = fvo_(a, i);
          for (std::size_t k = 0; k < no_; ++k) {
            for (std::size_t c = 0; c < nv_; ++c) {
              val += fov_(k, c) * T_(i * nv_ + a, k * nv_ + c);
              for (std::size_t d = 0; d < nv_; ++d) {
                val += S(0.5) * vat(v, vrt_[a], occ_[k], vrt_[c], vrt_[d]) *
                       T_(i * nv_ + c, k * nv_ + d);
              }
              for (std::size_t l = 0; l < no_; ++l) {
                val += S(0.5) * vat(v, occ_[k], occ_[l], vrt_[c], occ_[i]) *
                       T_(k * nv_ + a, l * nv_ + c);
              }
            }
          }
          R1_(i, a) = val;
          resmax = std::max(resmax, std::abs(val));
        }
      }
    }
    return resmax;
  }

  // Correlation energy split by the sector content of the doubles targets.
  // The one-body (pure-singles) share lands in the positive-sector part.
  void energies(double& e_pos, double& e_one_pair, double& e_two_pair) const {
    S acc[3] = {S(0), S(0), S(0)};
    for (const auto& [i, j] : opairs_) {
      for (const auto& [a, b] : vpairs_) {
        const int bucket = (vneg_[a] ? 1 : 0) + (vneg_[b] ? 1 : 0);
        acc[bucket] += Y_(i * nv_ + a, j * nv_ + b) * T_(i * nv_ + a, j * nv_ + b);
      }
    }
    const S e0_shift = e0_cur_ - S(e_ref_work_);
    e_pos = Traits::real_part(e0_shift) + Traits::real_part(acc[0]);
    e_one_pair = Traits::real_part(acc[1]);
    e_two_pair = Traits::real_part(acc[2]);
    // Only the SUM is guaranteed real where theory says so: the dressed
    // reference shift and the doubles contraction carry cancelling imaginary
    // parts individually.
    imag_leak_ =
        Traits::imag_part(e0_shift + acc[0] + acc[1] + acc[2]);
  }

  double imag_leak() const { return imag_leak_; }

  void solve(const SolverOptions& options, bool& converged, int& iterations,
             double& residual_norm) {
    for (const auto& [i, j] : opairs_) {
      for (const auto& [a, b] : vpairs_) {
        const double d = shifted(d_occ_[i] + d_occ_[j] - d_vrt_[a] - d_vrt_[b],
                                 options.level_shift);
        if (std::abs(d) < kDenominatorFloor) {
          std::ostringstream msg;
          msg << "degenerate doubles denominator for levels (" << occ_[i] << "," << occ_[j]
              << ") -> (" << vrt_[a] << "," << vrt_[b]
              << "); set a positive level_shift to regularize";
          throw Error(ErrorKind::degenerate, msg.str());
        }
      }
    }
    if (with_singles_) {
      for (std::size_t i = 0; i < no_; ++i) {
        for (std::size_t a = 0; a < nv_; ++a) {
          const double d = shifted(d_occ_[i] - d_vrt_[a], options.level_shift);
          if (std::abs(d) < kDenominatorFloor) {
            std::ostringstream msg;
            msg << "degenerate singles denominator for level pair (" << occ_[i] << ","
                << vrt_[a] << "); set a positive level_shift to regularize";
            throw Error(ErrorKind::degenerate, msg.str());
          }
        }
      }
    }

    const double step = 1.0 - options.damping;
    std::vector<double> history;
    double e_prev = std::numeric_limits<double>::quiet_NaN();
    converged = false;
    iterations = 0;
    residual_norm = 0.0;

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
      if (with_singles_ && iter > 1) refresh_blocks();
      residual_norm = compute_residuals();
      double e_pos = 0.0, e1 = 0.0, e2 = 0.0;
      energies(e_pos, e1, e2);
      const double e = e_pos + e1 + e2;
      history.push_back(e);
      iterations = iter;
      if (!std::isfinite(e) || !std::isfinite(residual_norm)) {
        throw Error(ErrorKind::numerical, "amplitude iteration produced non-finite values");
      }
      if (residual_norm <= options.residual_tolerance && iter > 1 &&
          std::abs(e - e_prev) <= options.energy_tolerance) {
        converged = true;
        break;
      }
      e_prev = e;

      for (const auto& [i, j] : opairs_) {
        for (const auto& [a, b] : vpairs_) {
          const double d = shifted(d_occ_[i] + d_occ_[j] - d_vrt_[a] - d_vrt_[b],
                                   options.level_shift);
          const S delta = S(step / d) * R2_(i * nv_ + a, j * nv_ + b);
          T_(i * nv_ + a, j * nv_ + b) += delta;
          T_(j * nv_ + a, i * nv_ + b) -= delta;
          T_(i * nv_ + b, j * nv_ + a) -= delta;
          T_(j * nv_ + b, i * nv_ + a) += delta;
        }
      }
      if (with_singles_) {
        for (std::size_t i = 0; i < no_; ++i) {
          for (std::size_t a = 0; a < nv_; ++a) {
            const double d = shifted(d_occ_[i] - d_vrt_[a], options.level_shift);
            T1_(i, a) += S(step / d) * R1_(i, a);
          }
        }
      }
    }

    if (!converged) {
      throw DivergenceError("amplitude iteration did not converge within " +
                                std::to_string(options.max_iterations) + " sweeps",
                            history);
    }
  }

  void export_amplitudes(Amplitudes& out) const {
    for (const auto& [i, j] : opairs_) {
      for (const auto& [a, b] : vpairs_) {
        const Complex value = Traits::to_complex(T_(i * nv_ + a, j * nv_ + b));
        if (value == Complex(0.0, 0.0)) continue;
        const int bucket = (vneg_[a] ? 1 : 0) + (vneg_[b] ? 1 : 0);
        if (bucket == 0) {
          out.set_t2(occ_[i], occ_[j], vrt_[a], vrt_[b], value);
        } else if (bucket == 1) {
          out.set_t2_one_pair(occ_[i], occ_[j], vrt_[a], vrt_[b], value);
        } else {
          out.set_t2_two_pair(occ_[i], occ_[j], vrt_[a], vrt_[b], value);
        }
      }
    }
    if (with_singles_) {
      for (std::size_t i = 0; i < no_; ++i) {
        for (std::size_t a = 0; a < nv_; ++a) {
          const Complex value = Traits::to_complex(T1_(i, a));
          if (value != Complex(0.0, 0.0)) out.t1[{occ_[i], vrt_[a]}] = value;
        }
      }
    }
  }

  Eigen::MatrixXcd r1_complex() const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(no_),
                                                  static_cast<Eigen::Index>(nv_));
    if (with_singles_ && R1_.size() > 0) {
      for (std::size_t i = 0; i < no_; ++i) {
        for (std::size_t a = 0; a < nv_; ++a) out(i, a) = Traits::to_complex(R1_(i, a));
      }
    }
    return out;
  }

  Eigen::MatrixXcd r2_complex() const {
    const Eigen::Index ov = static_cast<Eigen::Index>(no_ * nv_);
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ov, ov);
    for (Eigen::Index r = 0; r < ov; ++r) {
      for (Eigen::Index c = 0; c < ov; ++c) out(r, c) = Traits::to_complex(R2_(r, c));
    }
    return out;
  }

 private:
  S vat(const std::vector<S>& v, std::size_t p, std::size_t q, std::size_t r,
        std::size_t s) const {
    return v[((p * n_ + q) * n_ + r) * n_ + s];
  }

  Mat fock_of(const Mat& h, const std::vector<S>& v) const {
    Mat f = h;
    for (std::size_t p = 0; p < n_; ++p) {
      for (std::size_t q = 0; q < n_; ++q) {
        S acc(0);
        for (std::size_t k = 0; k < n_; ++k) {
          if (occupancy_[k] == 0.0) continue;
          acc += S(occupancy_[k]) * vat(v, p, k, q, k);
        }
        f(p, q) += acc;
      }
    }
    return f;
  }

  void transform_axis(std::vector<S>& t, const Mat& l, int axis) {
    const Eigen::Index n = static_cast<Eigen::Index>(n_);
    const Eigen::Index n2 = n * n;
    const Eigen::Index n3 = n2 * n;
    std::vector<S> tmp(t.size());
    if (axis == 0) {
      Eigen::Map<const RowMat> in(t.data(), n, n3);
      Eigen::Map<RowMat> out(tmp.data(), n, n3);
      out.noalias() = l * in;
    } else if (axis == 1) {
      for (Eigen::Index p = 0; p < n; ++p) {
        Eigen::Map<const RowMat> in(t.data() + p * n3, n, n2);
        Eigen::Map<RowMat> out(tmp.data() + p * n3, n, n2);
        out.noalias() = l * in;
      }
    } else if (axis == 2) {
      for (Eigen::Index pq = 0; pq < n2; ++pq) {
        Eigen::Map<const RowMat> in(t.data() + pq * n2, n, n);
        Eigen::Map<RowMat> out(tmp.data() + pq * n2, n, n);
        out.noalias() = l * in;
      }
    } else {
      Eigen::Map<const RowMat> in(t.data(), n3, n);
      Eigen::Map<RowMat> out(tmp.data(), n3, n);
      out.noalias() = in * l.transpose();
    }
    t.swap(tmp);
  }

  void build_blocks(const Mat& h, const std::vector<S>& v) {
    const Eigen::Index ov = static_cast<Eigen::Index>(no_ * nv_);
    Mat f = fock_of(h, v);
    e0_cur_ = S(0);
    for (std::size_t k = 0; k < n_; ++k) {
      if (occupancy_[k] == 0.0) continue;
      e0_cur_ += S(occupancy_[k]) * h(k, k);
      for (std::size_t l = 0; l < n_; ++l) {
        if (occupancy_[l] == 0.0) continue;
        e0_cur_ += S(0.5 * occupancy_[k] * occupancy_[l]) * vat(v, k, l, k, l);
      }
    }

    foo_.resize(static_cast<Eigen::Index>(no_), static_cast<Eigen::Index>(no_));
    fvv_.resize(static_cast<Eigen::Index>(nv_), static_cast<Eigen::Index>(nv_));
    fov_.resize(static_cast<Eigen::Index>(no_), static_cast<Eigen::Index>(nv_));
    fvo_.resize(static_cast<Eigen::Index>(nv_), static_cast<Eigen::Index>(no_));
    for (std::size_t i = 0; i < no_; ++i) {
      for (std::size_t j = 0; j < no_; ++j) foo_(i, j) = f(occ_[i], occ_[j]);
      for (std::size_t a = 0; a < nv_; ++a) {
        fov_(i, a) = f(occ_[i], vrt_[a]);
        fvo_(a, i) = f(vrt_[a], occ_[i]);
      }
    }
    for (std::size_t a = 0; a < nv_; ++a) {
      for (std::size_t b = 0; b < nv_; ++b) fvv_(a, b) = f(vrt_[a], vrt_[b]);
    }

    G_.resize(ov, ov);
    Y_.resize(ov, ov);
    Dov_.resize(ov, ov);
    for (std::size_t k = 0; k < no_; ++k) {
      for (std::size_t c = 0; c < nv_; ++c) {
        const std::size_t row = k * nv_ + c;
        for (std::size_t j = 0; j < no_; ++j) {
          for (std::size_t b = 0; b < nv_; ++b) {
            const std::size_t col = j * nv_ + b;
            G_(row, col) = vat(v, occ_[k], vrt_[b], vrt_[c], occ_[j]);
            Y_(row, col) = vat(v, occ_[k], occ_[j], vrt_[c], vrt_[b]);
            Dov_(row, col) = vat(v, vrt_[c], vrt_[b], occ_[k], occ_[j]);
          }
        }
      }
    }

    const Eigen::Index po = static_cast<Eigen::Index>(opairs_.size());
    const Eigen::Index pv = static_cast<Eigen::Index>(vpairs_.size());
    Vpp_.resize(pv, pv);
    for (Eigen::Index r = 0; r < pv; ++r) {
      const auto [c, d] = vpairs_[static_cast<std::size_t>(r)];
      for (Eigen::Index col = 0; col < pv; ++col) {
        const auto [a, b] = vpairs_[static_cast<std::size_t>(col)];
        Vpp_(r, col) = vat(v, vrt_[a], vrt_[b], vrt_[c], vrt_[d]);
      }
    }
    Voo_.resize(po, po);
    for (Eigen::Index r = 0; r < po; ++r) {
      const auto [i, j] = opairs_[static_cast<std::size_t>(r)];
      for (Eigen::Index col = 0; col < po; ++col) {
        const auto [k, l] = opairs_[static_cast<std::size_t>(col)];
        Voo_(r, col) = vat(v, occ_[k], occ_[l], occ_[i], occ_[j]);
      }
    }
    Vx_.resize(pv, po);
    for (Eigen::Index r = 0; r < pv; ++r) {
      const auto [c, d] = vpairs_[static_cast<std::size_t>(r)];
      for (Eigen::Index col = 0; col < po; ++col) {
        const auto [k, l] = opairs_[static_cast<std::size_t>(col)];
        Vx_(r, col) = vat(v, occ_[k], occ_[l], vrt_[c], vrt_[d]);
      }
    }
  }

  const ModelSystem* system_;
  bool with_singles_;
  std::size_t n_ = 0;
  std::size_t no_ = 0;
  std::size_t nv_ = 0;
  std::vector<std::size_t> occ_, vrt_;
  std::vector<bool> vneg_;
  std::vector<double> occupancy_;

  Mat h_;                // base working one-body
  std::vector<S> v_;     // base working two-body, flat n^4
  Mat hd_;               // singles-dressed copies (when active)
  std::vector<S> vd_;
  const std::vector<S>* v_cur_ = nullptr;
  Mat f_;                // base Fock matrix (denominator source)
  std::vector<double> d_occ_, d_vrt_;
  double e_ref_work_ = 0.0;
  S e0_cur_ = S(0);

  std::vector<std::pair<std::size_t, std::size_t>> opairs_, vpairs_;
  std::vector<int> op_idx_, vp_idx_;

  Mat G_, Y_, Dov_, Vpp_, Voo_, Vx_;
  Mat foo_, fvv_, fov_, fvo_;
  Mat T_, T1_, R2_, R1_;
  mutable double imag_leak_ = 0.0;
};

// Pair denominator of the first-order estimates, from bare level energies.
double pair_denominator(const ModelSystem& system, qed::PairDenominator mode,
                        std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
  const bool neg_a = system.levels[a].sector == Sector::negative;
  const bool neg_b = system.levels[b].sector == Sector::negative;
  if (mode == qed::PairDenominator::limit) {
    return (neg_a && neg_b) ? 4.0 * system.constants.mc2() : 2.0 * system.constants.mc2();
  }
  return system.levels[i].energy + system.levels[j].energy - system.levels[a].energy -
         system.levels[b].energy;
}

void fill_decoupled_pair_amplitudes(const ModelSystem& system,
                                    const qed::PairEnergyOptions& options,
                                    Amplitudes& amplitudes) {
  const auto occ = system.occupied_indices();
  const auto pos = system.positive_virtual_indices();
  const auto neg = system.negative_indices();
  const Tensor4& v = system.integrals.v_coulomb;
  for (std::size_t x = 0; x < occ.size(); ++x) {
    for (std::size_t y = x + 1; y < occ.size(); ++y) {
      const std::size_t i = occ[x], j = occ[y];
      for (std::size_t a : pos) {
        for (std::size_t p : neg) {
          const Complex coupling = v(a, p, i, j);
          if (coupling == Complex(0.0, 0.0)) continue;
          const double d = pair_denominator(system, options.denominator, i, j, a, p);
          amplitudes.set_t2_one_pair(i, j, a, p, coupling / d);
        }
      }
      for (std::size_t px = 0; px < neg.size(); ++px) {
        for (std::size_t qx = px + 1; qx < neg.size(); ++qx) {
          const std::size_t p = neg[px], q = neg[qx];
          const Complex coupling = v(p, q, i, j);
          if (coupling == Complex(0.0, 0.0)) continue;
          const double d = pair_denominator(system, options.denominator, i, j, p, q);
          amplitudes.set_t2_two_pair(i, j, p, q, coupling / d);
        }
      }
    }
  }
}

template <typename S>
void run_engine(const ModelSystem& system, const Materialized& mat, bool include_pairs,
                bool with_singles, const SolverOptions& options, CorrelationReport& report) {
  Engine<S> engine(system, mat, include_pairs, with_singles);
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  engine.solve(options, converged, iterations, residual_norm);
  double e_pos = 0.0, e1 = 0.0, e2 = 0.0;
  engine.energies(e_pos, e1, e2);
  report.e_correl_imag = engine.imag_leak();
  report.converged = converged;
  report.iterations = iterations;
  report.residual_norm = residual_norm;
  report.e_correl = e_pos;
  report.e_1pair = e1;
  report.e_2pair = e2;
  engine.export_amplitudes(report.amplitudes);
  report.amplitudes.iterations = iterations;
  report.amplitudes.residual_norm = residual_norm;
}

CorrelationReport run_cc(const ModelSystem& system, const ChannelSet& channels,
                         const SolverOptions& options, bool with_singles) {
  check_solvable(system);
  check_options(options);

  CorrelationReport report;
  report.method = with_singles ? "ccsd" : "ccd";
  report.channels = channels;
  report.e_reference = reference_energy(system);
  if (channels.breit) {
    report.e_breit0 = channel_reference_energy(system, ReferenceChannel::breit);
  }
  if (channels.hyperfine) {
    report.e_hf0 = channel_reference_energy(system, ReferenceChannel::hyperfine);
  }
  if (channels.lamb) {
    double shift = 0.0;
    if (!system.integrals.lamb_terms.empty()) {
      shift += qed::lamb_shift(system.integrals.lamb_terms, system.constants);
    }
    for (std::size_t k : system.occupied_indices()) {
      shift += system.levels[k].occupancy * system.levels[k].lamb_shift;
    }
    report.e_lamb0 = shift;
  }

  const bool include_pairs =
      options.pair_mode == PairMode::coupled && system.has_negative_sector();
  const Materialized mat = materialize(system, channels);
  if (mat.real_valued) {
    run_engine<double>(system, mat, include_pairs, with_singles, options, report);
  } else {
    run_engine<Complex>(system, mat, include_pairs, with_singles, options, report);
  }

  if (options.pair_mode == PairMode::decoupled && system.has_negative_sector()) {
    qed::PairEnergyOptions pair_options;
    pair_options.denominator = options.pair_denominator;
    const qed::PairEnergyReport pair = qed::pair_energy_mbpt2(system, pair_options);
    report.e_1pair = pair.one_pair;
    report.e_2pair = pair.two_pair;
    fill_decoupled_pair_amplitudes(system, pair_options, report.amplitudes);
  }
  return report;
}

}  // namespace

std::string to_string(PairMode mode) {
  switch (mode) {
    case PairMode::none:
      return "none";
    case PairMode::decoupled:
      return "decoupled";
    case PairMode::coupled:
      return "coupled";
  }
  return "none";
}

PairMode pair_mode_from_string(const std::string& name) {
  if (name == "none") return PairMode::none;
  if (name == "decoupled") return PairMode::decoupled;
  if (name == "coupled") return PairMode::coupled;
  throw Error(ErrorKind::argument, "unknown pair mode '" + name + "'");
}

CorrelationReport ccd_solve(const ModelSystem& system, const ChannelSet& channels,
                            const SolverOptions& options) {
  return run_cc(system, channels, options, /*with_singles=*/false);
}

CorrelationReport ccsd_solve(const ModelSystem& system, const ChannelSet& channels,
                             const SolverOptions& options) {
  return run_cc(system, channels, options, /*with_singles=*/true);
}

double mp2_energy(const ModelSystem& system, const ChannelSet& channels) {
  check_solvable(system);
  WorkingHamiltonian wh(system, channels);
  const auto occ = system.occupied_indices();
  const auto vrt = system.positive_virtual_indices();
  double energy = 0.0;
  for (std::size_t x = 0; x < occ.size(); ++x) {
    for (std::size_t y = x + 1; y < occ.size(); ++y) {
      for (std::size_t u = 0; u < vrt.size(); ++u) {
        for (std::size_t w = u + 1; w < vrt.size(); ++w) {
          const std::size_t i = occ[x], j = occ[y], a = vrt[u], b = vrt[w];
          const Complex coupling = wh.two_body(a, b, i, j);
          if (coupling == Complex(0.0, 0.0)) continue;
          const double d = system.levels[i].energy + system.levels[j].energy -
                           system.levels[a].energy - system.levels[b].energy;
          if (std::abs(d) < kDenominatorFloor) {
            std::ostringstream msg;
            msg << "degenerate second-order denominator for levels (" << i << "," << j
                << ") -> (" << a << "," << b << ")";
            throw Error(ErrorKind::degenerate, msg.str());
          }
          energy += std::norm(coupling) / d;
        }
      }
    }
  }
  return energy;
}

double dci_energy(const ModelSystem& system, const ChannelSet& channels,
                  std::size_t determinant_cap) {
  check_solvable(system);
  const fock::CISpace space =
      fock::enumerate(system, fock::GenerationRule::doubles_only, determinant_cap);
  const fock::EigenSolution solution = fock::diagonalize(space, system, channels);
  const fock::Determinant ref = fock::reference_determinant(system);
  const Complex h00 = fock::matrix_element(ref, ref, system, channels);
  return solution.eigenvalues.front() - h00.real();
}

namespace detail {

ResidualProbe probe_residuals(const ModelSystem& system, const ChannelSet& channels,
                              const Amplitudes& amplitudes, bool with_singles,
                              PairMode pair_mode) {
  check_solvable(system);
  const bool include_pairs =
      pair_mode == PairMode::coupled && system.has_negative_sector();
  const Materialized mat = materialize(system, channels);
  Engine<Complex> engine(system, mat, include_pairs, with_singles);
  engine.set_amplitudes(amplitudes);
  engine.compute_residuals();

  ResidualProbe probe;
  probe.occupied = engine.occupied();
  probe.virtuals = engine.virtuals();
  probe.r1 = engine.r1_complex();
  probe.r2 = engine.r2_complex();
  double e_pos = 0.0, e1 = 0.0, e2 = 0.0;
  engine.energies(e_pos, e1, e2);
  probe.e_corr = e_pos + e1 + e2;
  return probe;
}

}  // namespace detail

}  // namespace qedcc::cc
