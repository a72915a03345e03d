#pragma once

#include <concepts>

namespace mspgemm {

/// A semiring supplies the additive monoid (add, zero) and the multiply used
/// by every masked product. Kernels only ever combine stored nonzeros, so no
/// annihilation law is required.
template <typename S>
concept Semiring = requires(typename S::value_type a, typename S::value_type b) {
  typename S::value_type;
  { S::zero() } -> std::convertible_to<typename S::value_type>;
  { S::add(a, b) } -> std::convertible_to<typename S::value_type>;
  { S::multiply(a, b) } -> std::convertible_to<typename S::value_type>;
};

/// (+, ×, 0).
template <typename T>
struct Arithmetic {
  using value_type = T;
  static constexpr T zero() noexcept { return T(0); }
  static constexpr T add(T a, T b) noexcept { return a + b; }
  static constexpr T multiply(T a, T b) noexcept { return a * b; }
};

/// (+, pair, 0): every product is 1, so a sum counts structural overlaps.
template <typename T>
struct PlusPair {
  using value_type = T;
  static constexpr T zero() noexcept { return T(0); }
  static constexpr T add(T a, T b) noexcept { return a + b; }
  static constexpr T multiply(T, T) noexcept { return T(1); }
};

}  // namespace mspgemm
