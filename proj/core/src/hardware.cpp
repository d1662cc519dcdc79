#include "qfactor/hardware.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qfactor/errors.hpp"

namespace qfactor {

void HardwareModel::validate() const {
  if (!(coeff_range > 0)) throw std::invalid_argument("HardwareModel: coeff_range must be > 0");
  if (precision_bits < 1 || precision_bits > 60) {
    throw std::invalid_argument("HardwareModel: precision_bits must be in [1, 60]");
  }
  if (noise_sigma < 0) throw std::invalid_argument("HardwareModel: noise_sigma must be >= 0");
  if (chain_length < 1) throw std::invalid_argument("HardwareModel: chain_length must be >= 1");
  if (param_chain < 0) throw std::invalid_argument("HardwareModel: param_chain must be >= 0");
}

std::string HardwareModel::to_config() const {
  ConfigMap cfg;
  cfg.add_double("coeff_range", coeff_range);
  cfg.add_int64("precision_bits", precision_bits);
  cfg.add_double("noise_sigma", noise_sigma);
  cfg.add_int64("chain_length", chain_length);
  cfg.add_int64("param_chain", param_chain);
  cfg.add_int64("seed", static_cast<long long>(seed));
  return cfg.serialize();
}

HardwareModel HardwareModel::from_config(const ConfigMap& cfg) {
  HardwareModel hw;
  hw.coeff_range = cfg.get_double("coeff_range", hw.coeff_range);
  hw.precision_bits = cfg.get_int("precision_bits", hw.precision_bits);
  hw.noise_sigma = cfg.get_double("noise_sigma", hw.noise_sigma);
  hw.chain_length = cfg.get_int("chain_length", hw.chain_length);
  hw.param_chain = cfg.get_int64("param_chain", hw.param_chain);
  hw.seed = cfg.get_uint64("seed", hw.seed);
  try {
    hw.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return hw;
}

const std::vector<int>& DegradedQubo::chain_for(VarId v) const {
  auto it = std::lower_bound(logical_vars.begin(), logical_vars.end(), v);
  if (it == logical_vars.end() || *it != v) {
    throw MissingVariable("chain_for: unknown logical variable " + v.name());
  }
  return chains[static_cast<std::size_t>(it - logical_vars.begin())];
}

double DegradedQubo::energy(const std::vector<std::uint8_t>& physical) const {
  if (static_cast<int>(physical.size()) != num_physical()) {
    throw MissingVariable("energy: physical state has wrong size");
  }
  double total = 0.0;
  for (int i = 0; i < num_physical(); ++i) {
    if (physical[static_cast<std::size_t>(i)]) total += linear[static_cast<std::size_t>(i)];
  }
  for (const auto& [pair, c] : quadratic) {
    if (physical[static_cast<std::size_t>(pair.first)] &&
        physical[static_cast<std::size_t>(pair.second)]) {
      total += c;
    }
  }
  return total;
}

double quantize_coefficient(double value, double coeff_range, int precision_bits) {
  const double step = coeff_range / std::ldexp(1.0, precision_bits - 1);
  return std::round(value / step) * step;
}

namespace {

// Pre-scaling physical image: exact integer coefficients after chain
// expansion, before any floating-point enters the pipeline.
struct PhysicalImage {
  std::vector<Coeff> linear;
  std::map<std::pair<int, int>, Coeff> quadratic;
  std::vector<VarId> logical_vars;
  std::vector<std::vector<int>> chains;
  Coeff max_abs{0};
};

PhysicalImage build_physical(const Qubo& q, const HardwareModel& hw) {
  hw.validate();
  PhysicalImage img;
  img.logical_vars = q.variables();
  if (img.logical_vars.empty()) {
    throw std::invalid_argument("degrade: Qubo has no variables");
  }

  const int num_logical = static_cast<int>(img.logical_vars.size());
  const int length = hw.chain_length;
  img.chains.resize(static_cast<std::size_t>(num_logical));
  for (int i = 0; i < num_logical; ++i) {
    auto& chain = img.chains[static_cast<std::size_t>(i)];
    chain.resize(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) chain[static_cast<std::size_t>(t)] = i * length + t;
  }
  img.linear.assign(static_cast<std::size_t>(num_logical) * length, Coeff(0));

  std::map<VarId, int> logical_index;
  for (int i = 0; i < num_logical; ++i) logical_index[img.logical_vars[static_cast<std::size_t>(i)]] = i;
  auto first_of = [&](VarId v) { return logical_index.at(v) * length; };

  for (const auto& [v, h] : q.linear) {
    const Coeff share = h / length;  // truncating; remainder goes first
    const int base = first_of(v);
    img.linear[static_cast<std::size_t>(base)] += h - share * (length - 1);
    for (int t = 1; t < length; ++t) {
      img.linear[static_cast<std::size_t>(base + t)] += share;
    }
  }

  for (const auto& [pair, c] : q.quadratic) {
    int i = first_of(pair.first);
    int j = first_of(pair.second);
    if (j < i) std::swap(i, j);
    img.quadratic[{i, j}] += c;
  }

  if (length > 1 && hw.param_chain != 0) {
    const Coeff pc(hw.param_chain);
    for (const auto& chain : img.chains) {
      for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
        const int i = chain[t];
        const int j = chain[t + 1];
        img.quadratic[{i, j}] += Coeff(-2) * pc;
        img.linear[static_cast<std::size_t>(i)] += pc;
        img.linear[static_cast<std::size_t>(j)] += pc;
      }
    }
  }

  for (const auto& c : img.linear) img.max_abs = std::max(img.max_abs, abs_coeff(c));
  for (const auto& [pair, c] : img.quadratic) img.max_abs = std::max(img.max_abs, abs_coeff(c));
  return img;
}

// Box-Muller over the raw 64-bit engine stream; written out longhand so the
// noise sequence is identical on every platform for a given seed.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace

double compute_scale_factor(const Qubo& q, const HardwareModel& hw) {
  const PhysicalImage img = build_physical(q, hw);
  if (img.max_abs == 0) {
    throw std::invalid_argument("compute_scale_factor: all coefficients are zero");
  }
  return hw.coeff_range / to_double(img.max_abs);
}

DegradedQubo degrade(const Qubo& q, const HardwareModel& hw, std::uint64_t seed) {
  PhysicalImage img = build_physical(q, hw);
  if (img.max_abs == 0) {
    throw std::invalid_argument("degrade: all coefficients are zero, nothing to scale");
  }

  const double scale = hw.coeff_range / to_double(img.max_abs);
  // The extreme coefficient must land exactly on the range boundary; going
  // through the multiplication can be one ulp off.
  auto rescale = [&](const Coeff& c) {
    if (abs_coeff(c) == img.max_abs) return c < 0 ? -hw.coeff_range : hw.coeff_range;
    return to_double(c) * scale;
  };

  DegradedQubo out;
  out.scale_factor = scale;
  out.logical_vars = std::move(img.logical_vars);
  out.chains = std::move(img.chains);
  out.linear.resize(img.linear.size());
  for (std::size_t i = 0; i < img.linear.size(); ++i) {
    out.linear[i] = quantize_coefficient(rescale(img.linear[i]), hw.coeff_range, hw.precision_bits);
  }
  for (const auto& [pair, c] : img.quadratic) {
    const double quantized = quantize_coefficient(rescale(c), hw.coeff_range, hw.precision_bits);
    if (quantized != 0.0) out.quadratic.emplace(pair, quantized);
  }

  if (hw.noise_sigma > 0.0) {
    GaussianStream noise(seed);
    for (auto& c : out.linear) {
      if (c != 0.0) c += hw.noise_sigma * noise.next();
    }
    for (auto& [pair, c] : out.quadratic) {
      if (c != 0.0) c += hw.noise_sigma * noise.next();
    }
  }
  return out;
}

DynamicRange dynamic_range(const Qubo& q) {
  bool seen = false;
  DynamicRange out;
  auto feed = [&](const Coeff& c) {
    const Coeff a = abs_coeff(c);
    if (a == 0) return;
    if (!seen) {
      out.max_abs = a;
      out.min_abs_nonzero = a;
      seen = true;
    } else {
      out.max_abs = std::max(out.max_abs, a);
      out.min_abs_nonzero = std::min(out.min_abs_nonzero, a);
    }
  };
  for (const auto& [v, c] : q.linear) feed(c);
  for (const auto& [pair, c] : q.quadratic) feed(c);
  if (!seen) throw std::invalid_argument("dynamic_range: Qubo has no nonzero terms");
  out.ratio = to_double(out.max_abs) / to_double(out.min_abs_nonzero);
  return out;
}

ChainDecode decode_chains(const DegradedQubo& d, const std::vector<std::uint8_t>& physical) {
  if (static_cast<int>(physical.size()) != d.num_physical()) {
    throw MissingVariable("decode_chains: physical state has wrong size");
  }
  ChainDecode out;
  for (std::size_t i = 0; i < d.logical_vars.size(); ++i) {
    const auto& chain = d.chains[i];
    int ones = 0;
    for (int id : chain) ones += physical[static_cast<std::size_t>(id)] ? 1 : 0;
    const int length = static_cast<int>(chain.size());
    // Majority vote, ties to 1.
    out.logical[d.logical_vars[i]] = (2 * ones >= length) ? 1 : 0;
    if (ones != 0 && ones != length) {
      out.intact = false;
      ++out.break_count;
      out.broken.push_back(d.logical_vars[i]);
    }
  }
  return out;
}

}  // namespace qfactor
