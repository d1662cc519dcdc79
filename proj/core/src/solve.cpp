#include "qfactor/solve.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <type_traits>

#include "qfactor/errors.hpp"

namespace qfactor {

void ExactOptions::validate() const {
  if (max_variables < 0 || max_variables > 31) {
    throw std::invalid_argument("ExactOptions: max_variables must be in [0, 31]");
  }
  if (max_ground_states < 1) {
    throw std::invalid_argument("ExactOptions: max_ground_states must be >= 1");
  }
}

void AnnealSchedule::validate() const {
  if (sweeps < 1) throw std::invalid_argument("AnnealSchedule: sweeps must be >= 1");
  if (restarts < 1) throw std::invalid_argument("AnnealSchedule: restarts must be >= 1");
  const bool start_set = beta_start > 0.0;
  const bool end_set = beta_end > 0.0;
  if (start_set != end_set) {
    throw std::invalid_argument("AnnealSchedule: set both betas or neither");
  }
  if (start_set && !(beta_end > beta_start)) {
    throw std::invalid_argument("AnnealSchedule: beta_end must exceed beta_start");
  }
}

std::string energy_to_string(double e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", e);
  return buf;
}

namespace {

template <typename T>
double to_double_energy(const T& v) {
  if constexpr (std::is_same_v<T, Coeff>) {
    return to_double(v);
  } else {
    return static_cast<double>(v);
  }
}

template <typename T>
struct DenseInstance {
  std::vector<T> linear;
  std::vector<std::tuple<int, int, T>> pairs;  // i < j
  std::vector<std::vector<std::pair<int, T>>> adj;
  T offset{};

  int n() const { return static_cast<int>(linear.size()); }

  void build_adjacency() {
    adj.assign(linear.size(), {});
    for (const auto& [i, j, w] : pairs) {
      adj[static_cast<std::size_t>(i)].emplace_back(j, w);
      adj[static_cast<std::size_t>(j)].emplace_back(i, w);
    }
  }

  T full_energy(const std::vector<std::uint8_t>& bits) const {
    T total = offset;
    for (int i = 0; i < n(); ++i) {
      if (bits[static_cast<std::size_t>(i)]) total += linear[static_cast<std::size_t>(i)];
    }
    for (const auto& [i, j, w] : pairs) {
      if (bits[static_cast<std::size_t>(i)] && bits[static_cast<std::size_t>(j)]) total += w;
    }
    return total;
  }
};

template <typename T>
T narrow_coeff(const Coeff& c) {
  if constexpr (std::is_same_v<T, Coeff>) {
    return c;
  } else {
    return c.template convert_to<T>();
  }
}

template <typename T>
DenseInstance<T> dense_from_qubo(const Qubo& q, const std::vector<VarId>& vars) {
  DenseInstance<T> inst;
  inst.linear.assign(vars.size(), T{});
  std::map<VarId, int> index;
  for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = static_cast<int>(i);
  for (const auto& [v, c] : q.linear) inst.linear[static_cast<std::size_t>(index.at(v))] = narrow_coeff<T>(c);
  inst.pairs.reserve(q.quadratic.size());
  for (const auto& [pair, c] : q.quadratic) {
    int i = index.at(pair.first);
    int j = index.at(pair.second);
    if (j < i) std::swap(i, j);
    inst.pairs.emplace_back(i, j, narrow_coeff<T>(c));
  }
  inst.offset = narrow_coeff<T>(q.offset);
  inst.build_adjacency();
  return inst;
}

DenseInstance<double> dense_from_degraded(const DegradedQubo& d) {
  DenseInstance<double> inst;
  inst.linear = d.linear;
  inst.pairs.reserve(d.quadratic.size());
  for (const auto& [pair, c] : d.quadratic) inst.pairs.emplace_back(pair.first, pair.second, c);
  inst.offset = 0.0;
  inst.build_adjacency();
  return inst;
}

// Sum of |coefficients|, an upper bound on |energy| anywhere on the cube.
// When it fits comfortably in 64 bits the hot loops run on plain integers.
Coeff magnitude_bound(const Qubo& q) {
  Coeff bound = abs_coeff(q.offset);
  for (const auto& [v, c] : q.linear) bound += abs_coeff(c);
  for (const auto& [pair, c] : q.quadratic) bound += abs_coeff(c);
  return bound;
}

template <typename T>
void audit_energy(const T& full, const T& incremental) {
  if constexpr (std::is_floating_point_v<T>) {
    const double tol = 1e-6 * std::max(1.0, std::abs(static_cast<double>(full)));
    if (std::abs(static_cast<double>(full) - static_cast<double>(incremental)) > tol) {
      throw std::logic_error("solver: incremental energy drifted from recomputed energy");
    }
  } else {
    if (!(full == incremental)) {
      throw std::logic_error("solver: incremental energy disagrees with recomputed energy");
    }
  }
}

// Maps logical/physical bit vectors to decoded samples.
struct SampleDecoder {
  const ProblemSpec* spec = nullptr;
  const std::vector<VarId>* logical_vars = nullptr;  // Qubo mode
  const DegradedQubo* degraded = nullptr;            // chain mode

  template <typename E>
  Sample<E> make(std::vector<std::uint8_t> bits, E energy) const {
    Sample<E> s;
    s.state = std::move(bits);
    s.energy = energy;
    Assignment logical;
    if (degraded != nullptr) {
      ChainDecode cd = decode_chains(*degraded, s.state);
      logical = std::move(cd.logical);
      s.intact = cd.intact;
      s.break_count = cd.break_count;
      s.broken_chains = std::move(cd.broken);
    } else {
      for (std::size_t i = 0; i < logical_vars->size(); ++i) {
        logical[(*logical_vars)[i]] = s.state[i] ? 1 : 0;
      }
    }
    s.x = spec->x_encoding().decode_lenient(logical);
    s.y = spec->y_encoding().decode_lenient(logical);
    s.valid = s.intact && s.x * s.y == spec->n;
    return s;
  }
};

template <typename T>
struct GroundSet {
  T best{};
  std::vector<std::uint32_t> masks;
  std::uint64_t count = 0;
  bool truncated = false;
};

template <typename T>
GroundSet<T> enumerate_ground_states(const DenseInstance<T>& inst, std::size_t cap) {
  const int n = inst.n();
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n), 0);
  std::vector<T> fields = inst.linear;
  T energy = inst.offset;

  GroundSet<T> out;
  out.best = energy;
  out.masks.push_back(0);
  out.count = 1;

  const std::uint64_t total = n >= 64 ? 0 : (std::uint64_t{1} << n);
  for (std::uint64_t k = 1; k < total; ++k) {
    const int i = std::countr_zero(k);
    T delta = fields[static_cast<std::size_t>(i)];
    if (bits[static_cast<std::size_t>(i)]) delta = -delta;
    bits[static_cast<std::size_t>(i)] ^= 1;
    energy += delta;
    const bool now_on = bits[static_cast<std::size_t>(i)] != 0;
    for (const auto& [j, w] : inst.adj[static_cast<std::size_t>(i)]) {
      if (now_on) {
        fields[static_cast<std::size_t>(j)] += w;
      } else {
        fields[static_cast<std::size_t>(j)] -= w;
      }
    }
    if (energy < out.best) {
      out.best = energy;
      out.masks.clear();
      out.masks.push_back(static_cast<std::uint32_t>(k ^ (k >> 1)));
      out.count = 1;
      out.truncated = false;
    } else if (energy == out.best) {
      ++out.count;
      if (out.masks.size() < cap) {
        out.masks.push_back(static_cast<std::uint32_t>(k ^ (k >> 1)));
      } else {
        out.truncated = true;
      }
    }
  }
  return out;
}

template <typename E, typename T>
SolveResult<E> collect_exact(const DenseInstance<T>& inst, GroundSet<T> ground,
                             const SampleDecoder& decoder) {
  SolveResult<E> out;
  out.ground_state_count = ground.count;
  out.ground_states_truncated = ground.truncated;
  out.best_energy = static_cast<E>(ground.best);
  out.samples.reserve(ground.masks.size());
  for (std::uint32_t mask : ground.masks) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(inst.n()));
    for (int i = 0; i < inst.n(); ++i) {
      bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((mask >> i) & 1u);
    }
    const T full = inst.full_energy(bits);
    audit_energy(full, ground.best);
    Sample<E> s = decoder.make<E>(std::move(bits), static_cast<E>(full));
    if (s.valid) ++out.valid_count;
    out.samples.push_back(std::move(s));
  }
  out.distinct_count = count_distinct(out.samples);
  return out;
}

template <typename T>
struct SaRun {
  std::vector<std::uint8_t> bits;
  T energy{};
};

template <typename T>
SaRun<T> anneal_once(const DenseInstance<T>& inst, int sweeps, int restarts, double beta_start,
                     double beta_end, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // 53-bit uniform in [0, 1); hand-rolled so the stream is the same on
  // every platform for a given seed.
  auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  const int n = inst.n();
  const double growth =
      sweeps > 1 ? std::pow(beta_end / beta_start, 1.0 / static_cast<double>(sweeps - 1)) : 1.0;

  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  std::vector<T> fields;
  SaRun<T> best;
  bool have_best = false;

  for (int r = 0; r < restarts; ++r) {
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
    fields = inst.linear;
    for (const auto& [i, j, w] : inst.pairs) {
      if (bits[static_cast<std::size_t>(j)]) fields[static_cast<std::size_t>(i)] += w;
      if (bits[static_cast<std::size_t>(i)]) fields[static_cast<std::size_t>(j)] += w;
    }
    T energy = inst.full_energy(bits);
    if (!have_best || energy < best.energy) {
      best.energy = energy;
      best.bits = bits;
      have_best = true;
    }

    double beta = beta_start;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (int t = 0; t < n; ++t) {
        const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        T delta = fields[static_cast<std::size_t>(i)];
        if (bits[static_cast<std::size_t>(i)]) delta = -delta;
        bool accept;
        if (delta <= T{}) {
          accept = true;
        } else {
          const double scaled = beta * to_double_energy(delta);
          accept = scaled <= 700.0 && uniform01() < std::exp(-scaled);
        }
        if (accept) {
          bits[static_cast<std::size_t>(i)] ^= 1;
          energy += delta;
          const bool now_on = bits[static_cast<std::size_t>(i)] != 0;
          for (const auto& [j, w] : inst.adj[static_cast<std::size_t>(i)]) {
            if (now_on) {
              fields[static_cast<std::size_t>(j)] += w;
            } else {
              fields[static_cast<std::size_t>(j)] -= w;
            }
          }
          if (energy < best.energy) {
            best.energy = energy;
            best.bits = bits;
          }
        }
      }
      beta *= growth;
    }
  }

  const T full = inst.full_energy(best.bits);
  audit_energy(full, best.energy);
  best.energy = full;
  return best;
}

struct ResolvedBetas {
  double start;
  double end;
};

template <typename T>
ResolvedBetas resolve_betas(const DenseInstance<T>& inst, const AnnealSchedule& sched) {
  if (sched.beta_start > 0.0) return {sched.beta_start, sched.beta_end};
  double max_abs = 0.0;
  double min_abs = 0.0;
  auto feed = [&](double v) {
    const double a = std::abs(v);
    if (a == 0.0) return;
    max_abs = std::max(max_abs, a);
    min_abs = min_abs == 0.0 ? a : std::min(min_abs, a);
  };
  for (const auto& c : inst.linear) feed(to_double_energy(c));
  for (const auto& [i, j, w] : inst.pairs) feed(to_double_energy(w));
  if (max_abs == 0.0) return {0.01, 10.0};
  return {0.01 / max_abs, 10.0 / min_abs};
}

template <typename E, typename T>
SolveResult<E> run_sa(const DenseInstance<T>& inst, const AnnealSchedule& sched, int num_samples,
                      const SampleDecoder& decoder) {
  sched.validate();
  if (num_samples < 1) throw std::invalid_argument("solve_sa: num_samples must be >= 1");
  const ResolvedBetas betas = resolve_betas(inst, sched);

  SolveResult<E> out;
  out.samples.reserve(static_cast<std::size_t>(num_samples));
  for (int k = 0; k < num_samples; ++k) {
    SaRun<T> run = anneal_once(inst, sched.sweeps, sched.restarts, betas.start, betas.end,
                               sched.seed + static_cast<std::uint64_t>(k));
    Sample<E> s = decoder.make<E>(std::move(run.bits), static_cast<E>(run.energy));
    if (s.valid) ++out.valid_count;
    if (k == 0 || s.energy < out.best_energy) out.best_energy = s.energy;
    out.samples.push_back(std::move(s));
  }
  out.distinct_count = count_distinct(out.samples);
  return out;
}

void check_variable_cap(std::size_t count, int cap) {
  if (count > static_cast<std::size_t>(cap)) {
    throw VariableCountExceeded("exhaustive solve over " + std::to_string(count) +
                                " variables exceeds the cap of " + std::to_string(cap));
  }
}

constexpr std::uint64_t kInt64SafeBound = std::uint64_t{1} << 62;

}  // namespace

SolveResult<Coeff> solve_exact(const Qubo& q, const ProblemSpec& spec, const ExactOptions& opts) {
  opts.validate();
  spec.validate();
  const std::vector<VarId> vars = q.variables();
  check_variable_cap(vars.size(), opts.max_variables);
  const SampleDecoder decoder{&spec, &vars, nullptr};
  if (magnitude_bound(q) < Coeff(kInt64SafeBound)) {
    const auto inst = dense_from_qubo<long long>(q, vars);
    return collect_exact<Coeff>(inst, enumerate_ground_states(inst, opts.max_ground_states),
                                decoder);
  }
  const auto inst = dense_from_qubo<Coeff>(q, vars);
  return collect_exact<Coeff>(inst, enumerate_ground_states(inst, opts.max_ground_states),
                              decoder);
}

SolveResult<double> solve_exact(const DegradedQubo& d, const ProblemSpec& spec,
                                const ExactOptions& opts) {
  opts.validate();
  spec.validate();
  check_variable_cap(static_cast<std::size_t>(d.num_physical()), opts.max_variables);
  const SampleDecoder decoder{&spec, nullptr, &d};
  const auto inst = dense_from_degraded(d);
  return collect_exact<double>(inst, enumerate_ground_states(inst, opts.max_ground_states),
                               decoder);
}

SolveResult<Coeff> solve_sa(const Qubo& q, const ProblemSpec& spec, const AnnealSchedule& sched,
                            int num_samples) {
  spec.validate();
  const std::vector<VarId> vars = q.variables();
  const SampleDecoder decoder{&spec, &vars, nullptr};
  if (magnitude_bound(q) < Coeff(kInt64SafeBound)) {
    return run_sa<Coeff>(dense_from_qubo<long long>(q, vars), sched, num_samples, decoder);
  }
  return run_sa<Coeff>(dense_from_qubo<Coeff>(q, vars), sched, num_samples, decoder);
}

SolveResult<double> solve_sa(const DegradedQubo& d, const ProblemSpec& spec,
                             const AnnealSchedule& sched, int num_samples) {
  spec.validate();
  const SampleDecoder decoder{&spec, nullptr, &d};
  return run_sa<double>(dense_from_degraded(d), sched, num_samples, decoder);
}

}  // namespace qfactor
