#pragma once

#include "ermlab/packing.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ermlab {

/// GF(2^m) arithmetic via exp/log tables generated from a primitive
/// polynomial. Elements are ints in [0, 2^m); 0 is the additive identity.
class GaloisField {
 public:
  GaloisField(int exponent, std::uint32_t primitive_poly);

  /// Field with the standard primitive polynomial for 2 <= exponent <= 12.
  static GaloisField standard(int exponent);

  int exponent() const { return m_; }
  int order() const { return q_; }

  int exp(int i) const { return exp_[((i % (q_ - 1)) + (q_ - 1)) % (q_ - 1)]; }
  int log(int a) const;
  int mul(int a, int b) const;
  int inv(int a) const;

 private:
  int m_;
  int q_;
  std::vector<int> exp_;
  std::vector<int> log_;
};

/// Primitive narrow-sense BCH code of length 2^m - 1 correcting up to
/// designed_t errors: systematic encoding, syndrome decoding with
/// Berlekamp-Massey and a Chien search. The +-1 interface follows the
/// convention bit 0 <-> +1, bit 1 <-> -1, so the all-zero codeword is the
/// all-(+1) sign vector and sign-vector Hamming distance equals bit distance.
class BchCode {
 public:
  BchCode(int field_exponent, int designed_t);

  /// Look up the designed correction radius matching (length, dimension),
  /// e.g. (15, 7) -> t = 2 and (127, 64) -> t = 10.
  static BchCode from_length_and_dimension(int length, int dimension);

  int length() const { return n_; }       // d
  int dimension() const { return k_; }    // k
  int correction_radius() const { return t_; }  // r
  int field_exponent() const { return field_.exponent(); }
  const std::vector<std::uint8_t>& generator() const { return generator_; }

  /// max{1 - r/(2d), .} floor shared by every g_j of this code.
  double floor_value() const;

  /// Documented operation-count contract standing in for a wall-clock bound.
  std::string decode_cost_note() const;

  SignVector encode(const SignVector& message) const;

  /// Bounded-distance decode: if some codeword lies within Hamming distance
  /// r of word, returns its (unique) message; otherwise nullopt. Output is
  /// always re-verified against the syndrome test, so a returned message is
  /// guaranteed to re-encode to a codeword within distance r of the input.
  std::optional<SignVector> decode(const SignVector& word) const;

  /// g_j(x) via one decode of sgn(x) plus one re-encoding and inner-product
  /// check, exactly the two-decode-cost evaluation.
  double gj_value_fast(int j, Eigen::Ref<const Eigen::VectorXd> x) const;

  /// Oracle-only direct maximum over the 2^(k-1) codewords with z_j = +1;
  /// refuses k > 16.
  double gj_value_bruteforce(int j, Eigen::Ref<const Eigen::VectorXd> x) const;

  /// Exact population objective (1/k) sum_j g_j(x) from a single decode.
  double fd_code_exact(Eigen::Ref<const Eigen::VectorXd> x) const;

  nlohmann::json to_json() const;

  // Bit-level entry points (0/1 vectors); the +-1 interface wraps these.
  std::vector<std::uint8_t> encode_bits(const std::vector<std::uint8_t>& message) const;
  std::optional<std::vector<std::uint8_t>> decode_bits(std::vector<std::uint8_t> word) const;

 private:
  std::vector<int> syndromes(const std::vector<std::uint8_t>& word) const;
  double unit_inner(Eigen::Ref<const Eigen::VectorXd> x,
                    const std::vector<std::uint8_t>& bits) const;

  GaloisField field_;
  int n_;
  int k_;
  int t_;
  std::vector<std::uint8_t> generator_;  // degree n - k, coefficients in GF(2)
};

}  // namespace ermlab
