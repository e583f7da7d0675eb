#include "cgd/dyadic.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cgd {

namespace {

BigInt shifted(const BigInt& v, std::uint32_t bits) { return v << bits; }

BigInt parse_bigint(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty integer");
  std::size_t i = 0;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("malformed integer");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed integer");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-v) : v;
}

}  // namespace

Dyadic::Dyadic(BigInt numerator, std::uint32_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  normalize();
}

Dyadic Dyadic::pow2(std::int64_t k) {
  if (k >= 0) return Dyadic(BigInt(1) << static_cast<unsigned>(k), 0);
  return Dyadic(BigInt(1), static_cast<std::uint32_t>(-k));
}

void Dyadic::normalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  if (exp_ == 0) return;
  unsigned tz = boost::multiprecision::lsb(boost::multiprecision::abs(num_));
  unsigned drop = std::min<unsigned>(tz, exp_);
  num_ >>= drop;  // exact: low bits are zero
  exp_ -= drop;
}

std::int64_t Dyadic::to_int64() const {
  if (exp_ != 0) throw std::domain_error("dyadic is not an integer");
  if (num_ > std::numeric_limits<std::int64_t>::max() ||
      num_ < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer out of range");
  return static_cast<std::int64_t>(num_);
}

BigInt Dyadic::floor() const {
  if (exp_ == 0) return num_;
  // exp_ > 0 implies an odd numerator, so the shift is never exact
  if (num_.sign() >= 0) return num_ >> exp_;
  BigInt t = boost::multiprecision::abs(num_) >> exp_;
  return -t - 1;
}

BigInt Dyadic::ceil() const {
  if (exp_ == 0) return num_;
  return floor() + 1;
}

double Dyadic::to_double() const {
  return static_cast<double>(num_) / std::ldexp(1.0, static_cast<int>(exp_));
}

Dyadic Dyadic::operator-() const {
  Dyadic r = *this;
  r.num_ = -r.num_;
  return r;
}

Dyadic& Dyadic::operator+=(const Dyadic& o) {
  if (exp_ >= o.exp_) {
    num_ += shifted(o.num_, exp_ - o.exp_);
  } else {
    num_ = shifted(num_, o.exp_ - exp_) + o.num_;
    exp_ = o.exp_;
  }
  normalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& o) { return *this += -o; }

Dyadic& Dyadic::operator*=(const Dyadic& o) {
  num_ *= o.num_;
  exp_ += o.exp_;
  normalize();
  return *this;
}

Dyadic Dyadic::half() const { return Dyadic(num_, exp_ + 1); }

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  BigInt l = a.num_, r = b.num_;
  if (a.exp_ > b.exp_) r <<= (a.exp_ - b.exp_);
  else if (b.exp_ > a.exp_) l <<= (b.exp_ - a.exp_);
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Dyadic::to_wire() const {
  if (exp_ == 0) return num_.str();
  return num_.str() + "/2^" + std::to_string(exp_);
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return num_.str();
  return num_.str() + "/" + (BigInt(1) << exp_).str();
}

Dyadic Dyadic::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Dyadic(parse_bigint(text), 0);
  BigInt p = parse_bigint(text.substr(0, slash));
  std::string_view den = text.substr(slash + 1);
  if (den.starts_with("2^")) {
    unsigned e = 0;
    auto body = den.substr(2);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), e);
    if (ec != std::errc{} || ptr != body.data() + body.size() || e > 100000)
      throw std::invalid_argument("malformed exponent in dyadic");
    return Dyadic(p, e);
  }
  BigInt q = parse_bigint(den);
  if (q <= 0) throw std::invalid_argument("denominator must be positive");
  unsigned e = boost::multiprecision::lsb(q);
  if ((BigInt(1) << e) != q) throw std::invalid_argument("denominator is not a power of two");
  return Dyadic(p, e);
}

Dyadic Dyadic::simplest_between(const Dyadic* lo, const Dyadic* hi) {
  if (lo && hi && !(*lo < *hi)) throw std::invalid_argument("empty interval");
  auto inside = [&](const Dyadic& x) {
    return (!lo || *lo < x) && (!hi || x < *hi);
  };
  if (inside(Dyadic(0))) return Dyadic(0);
  if (lo && lo->sign() >= 0) {
    Dyadic k(lo->floor() + 1, 0);
    if (inside(k)) return k;
  } else if (hi && hi->sign() <= 0) {
    Dyadic k(hi->ceil() - 1, 0);
    if (inside(k)) return k;
  }
  // No integer fits, so both bounds are present and lie in one unit interval.
  for (std::uint32_t e = 1;; ++e) {
    BigInt scaled_floor = Dyadic(lo->num_ << e, lo->exp_).floor();
    Dyadic k(scaled_floor + 1, e);
    if (inside(k)) return k;
  }
}

}  // namespace cgd
