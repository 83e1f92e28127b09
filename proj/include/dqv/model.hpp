#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace dqv {

enum class ModelKind { Plane, Torus };

// Truncation data shared by every value of the graded algebra. Two series
// may be combined only if their configs compare equal.
struct ModelConfig {
  ModelKind kind = ModelKind::Plane;
  int dim = 1;        // number of base coordinates d
  int base_max = 4;   // plane: total base polynomial degree; torus: |k_i| input bound
  int fiber_max = 4;  // Y_max
  int hbar_max = 2;   // H_max
  int t_max = 0;      // T_max
  int matrix_size = 1;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

using ModelPtr = std::shared_ptr<const ModelConfig>;

ModelPtr make_model(ModelConfig cfg);

// One monomial x^a y^b th^s h^p t^r. Base exponents are >= 0 on the plane
// and signed Laurent modes on the torus. Theta generators are a subset of
// {1..d} stored as a bitmask, read in ascending order.
struct Monomial {
  std::vector<int> base;
  std::vector<int> fiber;
  std::uint32_t theta = 0;
  int hbar = 0;
  int tpow = 0;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;

  int fiber_degree() const {
    return std::accumulate(fiber.begin(), fiber.end(), 0);
  }
  int form_degree() const { return __builtin_popcount(theta); }
  int base_degree() const {
    return std::accumulate(base.begin(), base.end(), 0);
  }
  bool is_constant() const;
};

Monomial unit_monomial(const ModelConfig& m);

// F^k weight 2*hbar + fiber degree.
int filtration_weight(const Monomial& m);

// Multiplies two theta masks. Returns {0, sign=0} when a generator repeats,
// otherwise the merged mask and the Koszul sign of sorting a++b.
struct ThetaProduct {
  std::uint32_t mask;
  int sign;  // +1, -1, or 0
};
ThetaProduct theta_mul(std::uint32_t a, std::uint32_t b);

// Sign of extracting generator i (left derivative) from mask s; 0 if absent.
int theta_left_derive_sign(std::uint32_t s, int i);

std::string monomial_to_string(const Monomial& m, const ModelConfig& cfg);

}  // namespace dqv
