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

#include "qedcc/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include <Eigen/Eigenvalues>

namespace qedcc::fock {

namespace {

void check_level(std::size_t p) {
  if (p >= Determinant::kMaxLevels)
    throw Error(ErrorKind::capacity,
                "level index " + std::to_string(p) + " exceeds the " +
                    std::to_string(Determinant::kMaxLevels) + "-level index space");
}

}  // namespace

Determinant Determinant::from_indices(const std::vector<std::size_t>& levels) {
  Determinant d;
  for (auto p : levels) {
    check_level(p);
    if (d.occupied(p))
      throw Error(ErrorKind::argument,
                  "duplicate level " + std::to_string(p) + " in determinant");
    d.words_[p >> 6] |= std::uint64_t(1) << (p & 63);
  }
  return d;
}

std::size_t Determinant::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<std::size_t> Determinant::occupied_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  return out;
}

int Determinant::parity_below(std::size_t p) const {
  std::size_t c = 0;
  const std::size_t word = p >> 6, bit = p & 63;
  for (std::size_t w = 0; w < word; ++w)
    c += static_cast<std::size_t>(std::popcount(words_[w]));
  if (bit > 0)
    c += static_cast<std::size_t>(
        std::popcount(words_[word] & ((std::uint64_t(1) << bit) - 1)));
  return (c & 1) ? -1 : 1;
}

int Determinant::create(std::size_t p) {
  check_level(p);
  if (occupied(p)) return 0;
  int phase = parity_below(p);
  words_[p >> 6] |= std::uint64_t(1) << (p & 63);
  return phase;
}

int Determinant::annihilate(std::size_t p) {
  check_level(p);
  if (!occupied(p)) return 0;
  int phase = parity_below(p);
  words_[p >> 6] &= ~(std::uint64_t(1) << (p & 63));
  return phase;
}

bool Determinant::operator<(const Determinant& o) const {
  for (std::size_t w = words_.size(); w-- > 0;)
    if (words_[w] != o.words_[w]) return words_[w] < o.words_[w];
  return false;
}

std::string Determinant::to_string(std::size_t n_levels) const {
  std::string s(n_levels, '0');
  for (std::size_t p = 0; p < n_levels; ++p)
    if (occupied(p)) s[p] = '1';
  return s;
}

std::size_t DeterminantHash::operator()(const Determinant& d) const {
  std::size_t h = 1469598103934665603ull;
  for (auto w : d.words_) {
    h ^= static_cast<std::size_t>(w);
    h *= 1099511628211ull;
  }
  return h;
}

std::optional<std::size_t> CISpace::find(const Determinant& d) const {
  for (std::size_t i = 0; i < determinants.size(); ++i)
    if (determinants[i] == d) return i;
  return std::nullopt;
}

Determinant reference_determinant(const ModelSystem& system) {
  return Determinant::from_indices(system.occupied_indices());
}

namespace {

std::size_t excitation_rank(const Determinant& a, const Determinant& b) {
  // Count of levels occupied in a but not b.
  std::size_t rank = 0;
  for (auto p : a.occupied_indices())
    if (!b.occupied(p)) ++rank;
  return rank;
}

void sort_space(std::vector<Determinant>& dets, const Determinant& ref) {
  std::sort(dets.begin(), dets.end(), [&ref](const Determinant& x, const Determinant& y) {
    const std::size_t rx = excitation_rank(x, ref), ry = excitation_rank(y, ref);
    if (rx != ry) return rx < ry;
    return x < y;
  });
}

// Binomial coefficient with saturation at `cap + 1`.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > cap) return cap + 1;
  }
  return result;
}

void enumerate_full(const std::size_t n, const std::size_t k,
                    std::vector<Determinant>& out) {
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    out.push_back(Determinant::from_indices(pick));
    if (k == 0) return;
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i-- > 0) {
      if (pick[i] != i + n - k) {
        ++pick[i];
        for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

Determinant double_replacement(const Determinant& ref, std::size_t i, std::size_t j,
                               std::size_t a, std::size_t b, bool& ok) {
  Determinant d = ref;
  ok = d.annihilate(i) != 0 && d.annihilate(j) != 0 && d.create(b) != 0 &&
       d.create(a) != 0;
  return d;
}

}  // namespace

CISpace enumerate(const ModelSystem& system, GenerationRule rule, std::size_t cap) {
  const std::size_t n = system.n_levels();
  if (n > Determinant::kMaxLevels)
    throw Error(ErrorKind::capacity, "basis exceeds the 256-level index space");
  const std::size_t ne = system.integer_electron_count();
  if (ne > n)
    throw Error(ErrorKind::structural, "more electrons than levels");

  CISpace space;
  space.rule = rule;

  if (rule == GenerationRule::custom)
    throw Error(ErrorKind::argument, "custom spaces are assembled by the caller");

  if (rule == GenerationRule::full) {
    const std::size_t size = binomial_capped(n, ne, cap);
    if (size > cap)
      throw Error(ErrorKind::capacity,
                  "full space of C(" + std::to_string(n) + "," + std::to_string(ne) +
                      ") determinants exceeds the cap of " + std::to_string(cap));
    enumerate_full(n, ne, space.determinants);
    Determinant ref;
    if (static_cast<double>(ne) == system.n_electrons &&
        system.occupied_indices().size() == ne)
      ref = reference_determinant(system);
    sort_space(space.determinants, ref);
    return space;
  }

  // doubles_only / doubles_plus_pair
  const Determinant ref = reference_determinant(system);
  if (ref.count() != ne)
    throw Error(ErrorKind::structural,
                "reference occupation does not match n_electrons");
  const auto occ = system.occupied_indices();
  const auto virt = system.positive_virtual_indices();
  const auto neg = system.negative_indices();

  std::vector<Determinant> dets{ref};

  auto push_capped = [&dets, cap](const Determinant& d) {
    dets.push_back(d);
    if (dets.size() > cap)
      throw Error(ErrorKind::capacity,
                  "determinant space exceeds the cap of " + std::to_string(cap));
  };

  for (std::size_t ii = 0; ii < occ.size(); ++ii)
    for (std::size_t jj = ii + 1; jj < occ.size(); ++jj)
      for (std::size_t aa = 0; aa < virt.size(); ++aa)
        for (std::size_t bb = aa + 1; bb < virt.size(); ++bb) {
          bool ok = false;
          Determinant d = double_replacement(ref, occ[ii], occ[jj], virt[aa],
                                             virt[bb], ok);
          if (ok) push_capped(d);
        }

  if (rule == GenerationRule::doubles_plus_pair) {
    if (neg.empty())
      throw Error(ErrorKind::configuration,
                  "doubles_plus_pair requires negative-sector levels");
    auto couples_to_reference = [&](std::size_t i, std::size_t j, std::size_t A,
                                    std::size_t B) {
      return std::abs(system.integrals.v_coulomb(A, B, i, j)) > 0.0;
    };
    for (std::size_t ii = 0; ii < occ.size(); ++ii)
      for (std::size_t jj = ii + 1; jj < occ.size(); ++jj) {
        for (auto a : virt)
          for (auto p : neg) {
            if (!couples_to_reference(occ[ii], occ[jj], a, p)) continue;
            bool ok = false;
            Determinant d = double_replacement(ref, occ[ii], occ[jj], a, p, ok);
            if (ok) push_capped(d);
          }
        for (std::size_t pp = 0; pp < neg.size(); ++pp)
          for (std::size_t qq = pp + 1; qq < neg.size(); ++qq) {
            if (!couples_to_reference(occ[ii], occ[jj], neg[pp], neg[qq])) continue;
            bool ok = false;
            Determinant d = double_replacement(ref, occ[ii], occ[jj], neg[pp],
                                               neg[qq], ok);
            if (ok) push_capped(d);
          }
      }
  }

  std::sort(dets.begin(), dets.end());
  dets.erase(std::unique(dets.begin(), dets.end()), dets.end());
  sort_space(dets, ref);
  space.determinants = std::move(dets);
  return space;
}

Complex matrix_element(const Determinant& d1, const Determinant& d2,
                       const ModelSystem& system, const ChannelSet& channels) {
  const WorkingHamiltonian h(system, channels);
  if (d1.count() != d2.count()) return {0.0, 0.0};

  std::vector<std::size_t> bra_only, ket_only;
  for (auto p : d1.occupied_indices())
    if (!d2.occupied(p)) bra_only.push_back(p);
  for (auto p : d2.occupied_indices())
    if (!d1.occupied(p)) ket_only.push_back(p);

  const std::size_t rank = bra_only.size();
  if (rank > 2) return {0.0, 0.0};

  if (rank == 0) {
    const auto occ = d2.occupied_indices();
    Complex e = 0.0;
    for (auto p : occ) e += h.one_body(p, p);
    for (auto p : occ)
      for (auto q : occ) e += 0.5 * h.two_body(p, q, p, q);
    return e;
  }

  if (rank == 1) {
    const std::size_t p = bra_only[0], r = ket_only[0];
    Determinant work = d2;
    int phase = work.annihilate(r);
    phase *= work.create(p);
    if (phase == 0) return {0.0, 0.0};
    Complex e = h.one_body(p, r);
    for (auto q : work.occupied_indices())
      if (q != p) e += h.two_body(p, q, r, q);
    return static_cast<double>(phase) * e;
  }

  // rank == 2: <d1|H|d2> = phase * <pq||rs> with p<q bra-only, r<s ket-only
  // and the phase of a+_p a+_q a_s a_r applied to d2.
  const std::size_t p = bra_only[0], q = bra_only[1];
  const std::size_t r = ket_only[0], s = ket_only[1];
  Determinant work = d2;
  int phase = work.annihilate(r);
  phase *= work.annihilate(s);
  phase *= work.create(q);
  phase *= work.create(p);
  if (phase == 0) return {0.0, 0.0};
  return static_cast<double>(phase) * h.two_body(p, q, r, s);
}

Matrix build_matrix(const CISpace& space, const ModelSystem& system,
                    const ChannelSet& channels) {
  const std::size_t dim = space.size();
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      m(i, j) = matrix_element(space.determinants[i], space.determinants[j],
                               system, channels);
  return m;
}

EigenSolution diagonalize(const CISpace& space, const ModelSystem& system,
                          const ChannelSet& channels, double hermiticity_tolerance) {
  if (space.size() == 0)
    throw Error(ErrorKind::argument, "cannot diagonalize an empty space");
  Matrix m = build_matrix(space, system, channels);

  double worst = 0.0;
  std::size_t wi = 0, wj = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (dev > worst) {
        worst = dev;
        wi = static_cast<std::size_t>(i);
        wj = static_cast<std::size_t>(j);
      }
    }
  if (worst > hermiticity_tolerance)
    throw Error(ErrorKind::numerical,
                "Hamiltonian is non-Hermitian: entry (" + std::to_string(wi) + "," +
                    std::to_string(wj) + ") deviates by " + std::to_string(worst));

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::numerical, "dense Hermitian eigensolver failed");

  EigenSolution sol;
  sol.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
  sol.eigenvectors = solver.eigenvectors();
  return sol;
}

namespace {

struct ClusterTerm {
  // Creation levels applied last (ascending storage), annihilation levels
  // applied first; coefficient of the normal-ordered excitation string
  // a+_{c1} a+_{c2} a_{k2} a_{k1}.
  std::vector<std::size_t> create;
  std::vector<std::size_t> annihilate;
  Complex coefficient;
};

std::vector<ClusterTerm> cluster_terms(const Amplitudes& amps) {
  std::vector<ClusterTerm> terms;
  for (const auto& [key, value] : amps.t1)
    terms.push_back({{key.second}, {key.first}, value});
  for (const auto* block : {&amps.t2, &amps.t2_one_pair, &amps.t2_two_pair})
    for (const auto& [key, value] : *block)
      terms.push_back({{key[2], key[3]}, {key[1], key[0]}, value});
  return terms;
}

using StateMap = std::unordered_map<Determinant, Complex, DeterminantHash>;

// One application of the cluster operator to a coefficient map.
StateMap apply_terms(const std::vector<ClusterTerm>& terms, const StateMap& in) {
  StateMap out;
  for (const auto& [det, coeff] : in) {
    for (const auto& term : terms) {
      Determinant work = det;
      int phase = 1;
      // a+_{c1} a+_{c2} a_{k2} a_{k1}: rightmost operator acts first.
      bool dead = false;
      for (auto it = term.annihilate.rbegin(); it != term.annihilate.rend(); ++it) {
        int s = work.annihilate(*it);
        if (s == 0) { dead = true; break; }
        phase *= s;
      }
      if (dead) continue;
      for (auto it = term.create.rbegin(); it != term.create.rend(); ++it) {
        int s = work.create(*it);
        if (s == 0) { dead = true; break; }
        phase *= s;
      }
      if (dead) continue;
      out[work] += coeff * term.coefficient * static_cast<double>(phase);
    }
  }
  return out;
}

}  // namespace

ClusterExpansion apply_cluster(const Amplitudes& amplitudes,
                               const Determinant& reference, std::size_t order_cap,
                               std::size_t n_levels, std::size_t cap) {
  const auto terms = cluster_terms(amplitudes);

  StateMap total;
  StateMap power;
  power[reference] = Complex(1.0, 0.0);
  total = power;

  for (std::size_t k = 1; k <= order_cap && !power.empty(); ++k) {
    StateMap next = apply_terms(terms, power);
    for (auto& [det, coeff] : next) coeff /= static_cast<double>(k);
    power = std::move(next);
    for (const auto& [det, coeff] : power) total[det] += coeff;
    if (total.size() > cap)
      throw Error(ErrorKind::capacity,
                  "cluster expansion exceeds the determinant cap of " +
                      std::to_string(cap));
  }

  ClusterExpansion result;
  result.space.rule = GenerationRule::custom;
  result.space.determinants.reserve(total.size());
  for (const auto& [det, coeff] : total) result.space.determinants.push_back(det);
  sort_space(result.space.determinants, reference);
  result.coefficients = Vector::Zero(static_cast<Eigen::Index>(total.size()));
  for (std::size_t i = 0; i < result.space.determinants.size(); ++i)
    result.coefficients(static_cast<Eigen::Index>(i)) =
        total.at(result.space.determinants[i]);
  (void)n_levels;
  return result;
}

Matrix cluster_matrix(const Amplitudes& amplitudes, const CISpace& space) {
  const auto terms = cluster_terms(amplitudes);
  const std::size_t dim = space.size();

  std::unordered_map<Determinant, std::size_t, DeterminantHash> index;
  index.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) index[space.determinants[i]] = i;

  Matrix t = Matrix::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    StateMap one;
    one[space.determinants[col]] = Complex(1.0, 0.0);
    StateMap image = apply_terms(terms, one);
    for (const auto& [det, coeff] : image) {
      auto it = index.find(det);
      if (it != index.end())
        t(static_cast<Eigen::Index>(it->second), static_cast<Eigen::Index>(col)) +=
            coeff;
    }
  }
  return t;
}

Matrix nilpotent_exp(const Matrix& m) {
  const Eigen::Index dim = m.rows();
  Matrix result = Matrix::Identity(dim, dim);
  Matrix term = Matrix::Identity(dim, dim);
  for (Eigen::Index k = 1; k <= dim + 1; ++k) {
    term = (term * m) / static_cast<double>(k);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    result += term;
    if (k == dim + 1)
      throw Error(ErrorKind::contract,
                  "cluster matrix power series failed to terminate; the operator "
                  "is not strictly exciting on this space");
  }
  return result;
}

TransformedHamiltonian similarity_transform(const Amplitudes& amplitudes,
                                            const ModelSystem& system,
                                            const ChannelSet& channels,
                                            std::size_t cap) {
  TransformedHamiltonian out;
  out.space = enumerate(system, GenerationRule::full, cap);
  const Matrix h = build_matrix(out.space, system, channels);
  const Matrix t = cluster_matrix(amplitudes, out.space);
  const Matrix forward = nilpotent_exp(t);
  const Matrix backward = nilpotent_exp((-t).eval());
  out.matrix = backward * h * forward;
  return out;
}

}  // namespace qedcc::fock
