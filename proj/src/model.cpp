#include "dqv/model.hpp"

#include <stdexcept>

namespace dqv {

ModelPtr make_model(ModelConfig cfg) {
  if (cfg.dim < 1 || cfg.dim > 30) throw std::invalid_argument("model: dim out of range");
  if (cfg.base_max < 0 || cfg.fiber_max < 0 || cfg.hbar_max < 0 || cfg.t_max < 0)
    throw std::invalid_argument("model: negative cutoff");
  if (cfg.matrix_size < 1) throw std::invalid_argument("model: matrix size < 1");
  return std::make_shared<const ModelConfig>(cfg);
}

bool Monomial::is_constant() const {
  if (theta != 0 || hbar != 0 || tpow != 0) return false;
  for (int v : base)
    if (v != 0) return false;
  for (int v : fiber)
    if (v != 0) return false;
  return true;
}

Monomial unit_monomial(const ModelConfig& m) {
  Monomial r;
  r.base.assign(m.dim, 0);
  r.fiber.assign(m.dim, 0);
  return r;
}

int filtration_weight(const Monomial& m) { return 2 * m.hbar + m.fiber_degree(); }

ThetaProduct theta_mul(std::uint32_t a, std::uint32_t b) {
  if (a & b) return {0, 0};
  // Count inversions: pairs (i in a, j in b) with i > j.
  int inv = 0;
  for (std::uint32_t bb = b; bb; bb &= bb - 1) {
    int j = __builtin_ctz(bb);
    inv += __builtin_popcount(a >> (j + 1));
  }
  return {a | b, (inv & 1) ? -1 : 1};
}

int theta_left_derive_sign(std::uint32_t s, int i) {
  std::uint32_t bit = 1u << i;
  if (!(s & bit)) return 0;
  int before = __builtin_popcount(s & (bit - 1));
  return (before & 1) ? -1 : 1;
}

std::string monomial_to_string(const Monomial& m, const ModelConfig& cfg) {
  std::string out;
  auto app = [&out](const std::string& s) {
    if (!out.empty()) out += "*";
    out += s;
  };
  const char* base_name = cfg.kind == ModelKind::Plane ? "x" : "u";
  for (int i = 0; i < cfg.dim; ++i)
    if (m.base[i] != 0) {
      std::string g = base_name + std::to_string(i + 1);
      if (m.base[i] != 1) g += "^" + std::to_string(m.base[i]);
      app(g);
    }
  for (int i = 0; i < cfg.dim; ++i)
    if (m.fiber[i] != 0) {
      std::string g = "y" + std::to_string(i + 1);
      if (m.fiber[i] != 1) g += "^" + std::to_string(m.fiber[i]);
      app(g);
    }
  for (int i = 0; i < cfg.dim; ++i)
    if (m.theta & (1u << i)) app("th" + std::to_string(i + 1));
  if (m.hbar != 0) app(m.hbar == 1 ? "h" : "h^" + std::to_string(m.hbar));
  if (m.tpow != 0) app(m.tpow == 1 ? "t" : "t^" + std::to_string(m.tpow));
  if (out.empty()) out = "1";
  return out;
}

}  // namespace dqv
