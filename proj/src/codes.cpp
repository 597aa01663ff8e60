#include "ermlab/codes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ermlab {

namespace {

// Standard primitive polynomials over GF(2), index = field exponent m.
constexpr std::uint32_t kPrimitivePoly[] = {
    0, 0,
    0b111,            // m=2:  x^2 + x + 1
    0b1011,           // m=3:  x^3 + x + 1
    0b10011,          // m=4:  x^4 + x + 1
    0b100101,         // m=5:  x^5 + x^2 + 1
    0b1000011,        // m=6:  x^6 + x + 1
    0b10001001,       // m=7:  x^7 + x^3 + 1
    0b100011101,      // m=8:  x^8 + x^4 + x^3 + x^2 + 1
    0b1000010001,     // m=9:  x^9 + x^4 + 1
    0b10000001001,    // m=10: x^10 + x^3 + 1
    0b100000000101,   // m=11: x^11 + x^2 + 1
    0b1000001010011,  // m=12: x^12 + x^6 + x^4 + x + 1
};

std::vector<std::uint8_t> signs_to_bits(const SignVector& v) {
  std::vector<std::uint8_t> bits(v.size());
  for (int i = 0; i < v.size(); ++i) bits[i] = v.entries()[i] == -1 ? 1 : 0;
  return bits;
}

SignVector bits_to_signs(const std::vector<std::uint8_t>& bits) {
  Eigen::VectorXi entries(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) entries[static_cast<int>(i)] = bits[i] ? -1 : 1;
  return SignVector(std::move(entries));
}

}  // namespace

GaloisField::GaloisField(int exponent, std::uint32_t primitive_poly)
    : m_(exponent), q_(1 << exponent), exp_(q_, 0), log_(q_, -1) {
  if (exponent < 2 || exponent > 16)
    throw std::invalid_argument("GaloisField: exponent out of range");
  int value = 1;
  for (int i = 0; i < q_ - 1; ++i) {
    exp_[i] = value;
    if (log_[value] != -1)
      throw std::invalid_argument("GaloisField: polynomial is not primitive");
    log_[value] = i;
    value <<= 1;
    if (value & q_) value ^= static_cast<int>(primitive_poly);
  }
  exp_[q_ - 1] = 1;
}

GaloisField GaloisField::standard(int exponent) {
  if (exponent < 2 || exponent > 12)
    throw std::invalid_argument("GaloisField: no standard polynomial for this exponent");
  return GaloisField(exponent, kPrimitivePoly[exponent]);
}

int GaloisField::log(int a) const {
  if (a <= 0 || a >= q_) throw std::invalid_argument("GaloisField: log of non-element");
  return log_[a];
}

int GaloisField::mul(int a, int b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

int GaloisField::inv(int a) const {
  if (a == 0) throw std::invalid_argument("GaloisField: inverse of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

BchCode::BchCode(int field_exponent, int designed_t)
    : field_(GaloisField::standard(field_exponent)),
      n_((1 << field_exponent) - 1),
      t_(designed_t) {
  if (designed_t < 1 || 2 * designed_t >= n_)
    throw std::invalid_argument("BchCode: designed t out of range");

  // Cyclotomic cosets of the exponents 1 .. 2t.
  std::vector<std::vector<int>> cosets;
  std::set<int> seen;
  for (int e = 1; e <= 2 * t_; ++e) {
    if (seen.count(e)) continue;
    std::vector<int> coset;
    int c = e;
    do {
      coset.push_back(c);
      seen.insert(c);
      c = (2 * c) % n_;
    } while (c != e);
    cosets.push_back(std::move(coset));
  }

  // Generator = product over cosets of the minimal polynomial
  // prod_{c in coset} (x + alpha^c); coefficients land in GF(2).
  std::vector<std::uint8_t> gen = {1};
  for (const auto& coset : cosets) {
    std::vector<int> minimal = {1};
    for (int e : coset) {
      int root = field_.exp(e);
      std::vector<int> next(minimal.size() + 1, 0);
      for (std::size_t i = 0; i < minimal.size(); ++i) {
        next[i + 1] ^= minimal[i];
        next[i] ^= field_.mul(minimal[i], root);
      }
      minimal = std::move(next);
    }
    std::vector<std::uint8_t> bits(minimal.size());
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      if (minimal[i] != 0 && minimal[i] != 1)
        throw std::logic_error("BchCode: minimal polynomial not over GF(2)");
      bits[i] = static_cast<std::uint8_t>(minimal[i]);
    }
    std::vector<std::uint8_t> product(gen.size() + bits.size() - 1, 0);
    for (std::size_t i = 0; i < gen.size(); ++i)
      if (gen[i])
        for (std::size_t j = 0; j < bits.size(); ++j) product[i + j] ^= bits[j];
    gen = std::move(product);
  }
  generator_ = std::move(gen);
  k_ = n_ - static_cast<int>(generator_.size() - 1);
  if (k_ < 1) throw std::invalid_argument("BchCode: generator degree leaves no message bits");
}

BchCode BchCode::from_length_and_dimension(int length, int dimension) {
  int m = 0;
  for (int e = 2; e <= 12; ++e)
    if ((1 << e) - 1 == length) m = e;
  if (m == 0) throw std::invalid_argument("BchCode: length must be 2^m - 1 for 2 <= m <= 12");

  // Dimension decreases as the designed radius grows; walk t upward via the
  // cyclotomic-coset union until the dimension matches.
  std::set<int> covered;
  int degree = 0;
  for (int t = 1; 2 * t < length; ++t) {
    for (int e = 2 * (t - 1) + 1; e <= 2 * t; ++e) {
      if (covered.count(e)) continue;
      int c = e;
      do {
        covered.insert(c);
        ++degree;
        c = (2 * c) % length;
      } while (c != e);
    }
    int k = length - degree;
    if (k == dimension) return BchCode(m, t);
    if (k < dimension) break;
  }
  std::ostringstream msg;
  msg << "BchCode: no primitive narrow-sense code with length " << length
      << " and dimension " << dimension;
  throw std::invalid_argument(msg.str());
}

double BchCode::floor_value() const {
  return 1.0 - static_cast<double>(t_) / (2.0 * static_cast<double>(n_));
}

std::string BchCode::decode_cost_note() const {
  std::ostringstream note;
  note << "decode cost: syndrome pass " << 2 * t_ << "*" << n_
       << " table ops, Berlekamp-Massey <= " << 2 * t_ << "*" << t_
       << " field ops, Chien search " << n_ << "*" << t_
       << " field ops, verification pass " << 2 * t_ << "*" << n_ << " table ops";
  return note.str();
}

std::vector<std::uint8_t> BchCode::encode_bits(const std::vector<std::uint8_t>& message) const {
  if (static_cast<int>(message.size()) != k_)
    throw std::invalid_argument("BchCode: message length must equal k");
  int nk = n_ - k_;
  std::vector<std::uint8_t> parity(nk, 0);
  for (int j = k_ - 1; j >= 0; --j) {
    std::uint8_t feedback = message[j] ^ parity[nk - 1];
    for (int i = nk - 1; i > 0; --i)
      parity[i] = parity[i - 1] ^ (feedback ? generator_[i] : 0);
    parity[0] = feedback ? generator_[0] : 0;
  }
  std::vector<std::uint8_t> codeword(n_);
  std::copy(parity.begin(), parity.end(), codeword.begin());
  std::copy(message.begin(), message.end(), codeword.begin() + nk);
  return codeword;
}

std::vector<int> BchCode::syndromes(const std::vector<std::uint8_t>& word) const {
  std::vector<int> synd(2 * t_, 0);
  for (int pos = 0; pos < n_; ++pos) {
    if (!word[pos]) continue;
    for (int i = 0; i < 2 * t_; ++i) synd[i] ^= field_.exp((i + 1) * pos);
  }
  return synd;
}

std::optional<std::vector<std::uint8_t>> BchCode::decode_bits(std::vector<std::uint8_t> word) const {
  if (static_cast<int>(word.size()) != n_)
    throw std::invalid_argument("BchCode: word length must equal d");

  std::vector<int> synd = syndromes(word);
  bool clean = std::all_of(synd.begin(), synd.end(), [](int s) { return s == 0; });
  if (!clean) {
    // Berlekamp-Massey for the error locator sigma.
    std::vector<int> sigma = {1};
    std::vector<int> prev = {1};
    int L = 0;
    int shift = 1;
    int prev_delta = 1;
    for (int r = 0; r < 2 * t_; ++r) {
      int delta = synd[r];
      for (int i = 1; i <= L && i < static_cast<int>(sigma.size()); ++i)
        delta ^= field_.mul(sigma[i], synd[r - i]);
      if (delta == 0) {
        ++shift;
        continue;
      }
      int coef = field_.mul(delta, field_.inv(prev_delta));
      if (2 * L <= r) {
        std::vector<int> keep = sigma;
        if (sigma.size() < prev.size() + shift) sigma.resize(prev.size() + shift, 0);
        for (std::size_t i = 0; i < prev.size(); ++i)
          sigma[i + shift] ^= field_.mul(coef, prev[i]);
        L = r + 1 - L;
        prev = std::move(keep);
        prev_delta = delta;
        shift = 1;
      } else {
        if (sigma.size() < prev.size() + shift) sigma.resize(prev.size() + shift, 0);
        for (std::size_t i = 0; i < prev.size(); ++i)
          sigma[i + shift] ^= field_.mul(coef, prev[i]);
        ++shift;
      }
    }
    while (!sigma.empty() && sigma.back() == 0) sigma.pop_back();
    int degree = static_cast<int>(sigma.size()) - 1;
    if (degree != L || L > t_) return std::nullopt;

    // Chien search: sigma(alpha^j) = 0 marks an error at position n - j.
    std::vector<int> locations;
    for (int j = 0; j < n_; ++j) {
      int acc = 0;
      for (int i = 0; i <= degree; ++i)
        if (sigma[i]) acc ^= field_.mul(sigma[i], field_.exp(i * j));
      if (acc == 0) locations.push_back((n_ - j) % n_);
    }
    if (static_cast<int>(locations.size()) != degree) return std::nullopt;
    for (int pos : locations) word[pos] ^= 1;

    std::vector<int> recheck = syndromes(word);
    if (!std::all_of(recheck.begin(), recheck.end(), [](int s) { return s == 0; }))
      return std::nullopt;
  }
  return std::vector<std::uint8_t>(word.begin() + (n_ - k_), word.end());
}

SignVector BchCode::encode(const SignVector& message) const {
  if (message.size() != k_)
    throw std::invalid_argument("BchCode: message length must equal k");
  return bits_to_signs(encode_bits(signs_to_bits(message)));
}

std::optional<SignVector> BchCode::decode(const SignVector& word) const {
  if (word.size() != n_)
    throw std::invalid_argument("BchCode: word length must equal d");
  auto bits = decode_bits(signs_to_bits(word));
  if (!bits) return std::nullopt;
  return bits_to_signs(*bits);
}

double BchCode::unit_inner(Eigen::Ref<const Eigen::VectorXd> x,
                           const std::vector<std::uint8_t>& bits) const {
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) acc += bits[i] ? -x[i] : x[i];
  return acc / std::sqrt(static_cast<double>(n_));
}

namespace {
void check_unit_ball(Eigen::Ref<const Eigen::VectorXd> x, int n) {
  if (x.size() != n) throw std::invalid_argument("code evaluation: wrong dimension");
  if (x.norm() > 1.0 + 1e-9)
    throw std::domain_error("code evaluation: point outside the unit ball");
}
}  // namespace

double BchCode::gj_value_fast(int j, Eigen::Ref<const Eigen::VectorXd> x) const {
  if (j < 0 || j >= k_) throw std::out_of_range("gj_value_fast: index out of range");
  check_unit_ball(x, n_);
  double floor = floor_value();

  std::vector<std::uint8_t> hard(n_);
  for (int i = 0; i < n_; ++i) hard[i] = x[i] < 0.0 ? 1 : 0;  // sgn(0) = +1
  auto message = decode_bits(hard);
  if (!message) return floor;
  if ((*message)[j] != 0) return floor;  // z_j = -1
  double inner = unit_inner(x, encode_bits(*message));
  return inner >= floor ? inner : floor;
}

double BchCode::gj_value_bruteforce(int j, Eigen::Ref<const Eigen::VectorXd> x) const {
  if (k_ > 16) throw std::invalid_argument("gj_value_bruteforce: refuses k > 16");
  if (j < 0 || j >= k_) throw std::out_of_range("gj_value_bruteforce: index out of range");
  check_unit_ball(x, n_);
  double best = floor_value();
  std::vector<std::uint8_t> message(k_);
  for (std::uint32_t u = 0; u < (1u << k_); ++u) {
    if ((u >> j) & 1u) continue;  // need z_j = +1, i.e. bit j clear
    for (int b = 0; b < k_; ++b) message[b] = (u >> b) & 1u;
    best = std::max(best, unit_inner(x, encode_bits(message)));
  }
  return best;
}

double BchCode::fd_code_exact(Eigen::Ref<const Eigen::VectorXd> x) const {
  check_unit_ball(x, n_);
  double floor = floor_value();

  std::vector<std::uint8_t> hard(n_);
  for (int i = 0; i < n_; ++i) hard[i] = x[i] < 0.0 ? 1 : 0;
  auto message = decode_bits(hard);
  if (!message) return floor;
  double inner = unit_inner(x, encode_bits(*message));
  if (inner < floor) return floor;
  int plus = 0;
  for (int b = 0; b < k_; ++b)
    if ((*message)[b] == 0) ++plus;  // #1(z): entries equal to +1
  double share = static_cast<double>(plus) / static_cast<double>(k_);
  return share * inner + (1.0 - share) * floor;
}

nlohmann::json BchCode::to_json() const {
  std::string gen;
  gen.reserve(generator_.size());
  for (auto c : generator_) gen.push_back(c ? '1' : '0');
  return {{"length", n_},
          {"dimension", k_},
          {"correction_radius", t_},
          {"field_exponent", field_.exponent()},
          {"generator_low_to_high", gen},
          {"decode_cost_note", decode_cost_note()}};
}

}  // namespace ermlab
