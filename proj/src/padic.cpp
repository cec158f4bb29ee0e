#include "stabforge/padic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace stabforge {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonUnit: return "NonUnit";
    case ErrorKind::NotASquare: return "NotASquare";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::PrecisionOverflow: return "PrecisionOverflow";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IndeterminateAtPrecision: return "IndeterminateAtPrecision";
    case ErrorKind::DepthTooSmall: return "DepthTooSmall";
    case ErrorKind::UnsupportedParameters: return "UnsupportedParameters";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::PrecisionTooLow: return "PrecisionTooLow";
    case ErrorKind::BadAction: return "BadAction";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Error";
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

u64 ipow(u64 b, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (b != 0 && r > kMaxModulus / b)
      throw Error(ErrorKind::PrecisionOverflow, "power exceeds 2^62");
    r *= b;
  }
  return r;
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

unsigned vp(u64 x, unsigned p) {
  unsigned v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

unsigned max_precision(unsigned p) {
  unsigned n = 0;
  u64 m = 1;
  while (m <= kMaxModulus / p) {
    m *= p;
    ++n;
  }
  return n;
}

PadicInt::PadicInt(unsigned p, unsigned N, u64 value) : p_(p), n_(N) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime");
  if (N < 1) throw Error(ErrorKind::InvalidArgument, "precision must be >= 1");
  mod_ = ipow(p, N);
  v_ = value % mod_;
}

PadicInt PadicInt::from_integer(i64 z, unsigned p, unsigned N) {
  PadicInt r(p, N, 0);
  i64 m = static_cast<i64>(r.mod_);
  i64 v = z % m;
  if (v < 0) v += m;
  r.v_ = static_cast<u64>(v);
  return r;
}

PadicInt PadicInt::from_digits(unsigned p, const std::vector<unsigned>& digits) {
  if (digits.empty()) throw Error(ErrorKind::InvalidArgument, "empty digit list");
  PadicInt r(p, static_cast<unsigned>(digits.size()), 0);
  u64 v = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= p) throw Error(ErrorKind::InvalidArgument, "digit out of range");
    v = v * p + digits[i];
  }
  r.v_ = v;
  return r;
}

PadicInt PadicInt::parse_literal(const std::string& s) {
  // p:<prime> [d0,d1,...]
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto number = [&]() -> u64 {
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw Error(ErrorKind::ParseError, "expected digit in '" + s + "'");
    u64 v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + static_cast<u64>(s[i] - '0');
      if (v > (u64(1) << 32)) throw Error(ErrorKind::ParseError, "number too large");
      ++i;
    }
    return v;
  };
  auto expect = [&](char c) {
    skip();
    if (i >= s.size() || s[i] != c)
      throw Error(ErrorKind::ParseError, std::string("expected '") + c + "' in '" + s + "'");
    ++i;
  };
  expect('p');
  expect(':');
  unsigned p = static_cast<unsigned>(number());
  expect('[');
  std::vector<unsigned> d;
  skip();
  if (i < s.size() && s[i] == ']') throw Error(ErrorKind::ParseError, "empty digit list");
  for (;;) {
    d.push_back(static_cast<unsigned>(number()));
    skip();
    if (i < s.size() && s[i] == ',') {
      ++i;
      continue;
    }
    break;
  }
  expect(']');
  skip();
  if (i != s.size()) throw Error(ErrorKind::ParseError, "trailing characters in '" + s + "'");
  if (!is_prime(p)) throw Error(ErrorKind::ParseError, "p must be prime");
  return from_digits(p, d);
}

i64 PadicInt::centered() const {
  if (v_ > mod_ / 2) return -static_cast<i64>(mod_ - v_);
  return static_cast<i64>(v_);
}

std::vector<unsigned> PadicInt::digits() const {
  std::vector<unsigned> d(n_);
  u64 v = v_;
  for (unsigned i = 0; i < n_; ++i) {
    d[i] = static_cast<unsigned>(v % p_);
    v /= p_;
  }
  return d;
}

std::string PadicInt::literal() const {
  std::ostringstream os;
  os << "p:" << p_ << " [";
  auto d = digits();
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
  os << "]";
  return os.str();
}

unsigned PadicInt::valuation() const { return v_ == 0 ? n_ : vp(v_, p_); }

void PadicInt::check_compat(const PadicInt& o) const {
  if (p_ != o.p_) throw Error(ErrorKind::InvalidArgument, "mismatched primes");
}

PadicInt PadicInt::at_min(const PadicInt& o, u64 value) const {
  PadicInt r = n_ <= o.n_ ? *this : o;
  r.v_ = value % r.mod_;
  return r;
}

PadicInt PadicInt::operator+(const PadicInt& o) const {
  check_compat(o);
  u64 m = std::min(mod_, o.mod_);
  return at_min(o, (v_ % m + o.v_ % m) % m);
}

PadicInt PadicInt::operator-(const PadicInt& o) const {
  check_compat(o);
  u64 m = std::min(mod_, o.mod_);
  return at_min(o, (v_ % m + m - o.v_ % m) % m);
}

PadicInt PadicInt::operator*(const PadicInt& o) const {
  check_compat(o);
  u64 m = std::min(mod_, o.mod_);
  return at_min(o, mulmod(v_ % m, o.v_ % m, m));
}

PadicInt PadicInt::operator-() const {
  PadicInt r = *this;
  r.v_ = (mod_ - v_) % mod_;
  return r;
}

PadicInt PadicInt::pow(u64 e) const {
  PadicInt r = *this;
  r.v_ = powmod(v_, e, mod_);
  return r;
}

PadicInt PadicInt::invert() const {
  if (!is_unit()) throw Error(ErrorKind::NonUnit, "inverting a non-unit " + literal());
  // Newton iteration y <- y(2 - xy) from the inverse mod p.
  u64 y = powmod(v_ % p_, p_ - 2, p_);
  if (p_ == 2) y = 1;
  for (u64 m = p_; m < mod_;) {
    m = (m > mod_ / m) ? mod_ : m * m;
    u64 xy = mulmod(v_ % m, y, m);
    y = mulmod(y, (2 + m - xy) % m, m);
  }
  PadicInt r = *this;
  r.v_ = y % mod_;
  return r;
}

PadicInt PadicInt::exact_div_by_p() const {
  if (v_ % p_ != 0)
    throw Error(ErrorKind::NonUnit, "exact division by p of a unit " + literal());
  if (n_ < 2) throw Error(ErrorKind::InsufficientPrecision, "no digits left after division by p");
  PadicInt r(p_, n_ - 1, v_ / p_);
  return r;
}

PadicInt PadicInt::reduce(unsigned N) const {
  if (N > n_) throw Error(ErrorKind::InsufficientPrecision, "cannot raise precision");
  return PadicInt(p_, N, v_);
}

PadicUnit teichmuller_lift(unsigned c, unsigned p, unsigned N) {
  if (c == 0 || c >= p) throw Error(ErrorKind::InvalidArgument, "residue must lie in [1, p)");
  PadicInt x(p, N, c);
  for (unsigned i = 0; i < N; ++i) x = x.pow(p);
  return x;
}

PadicUnit hensel_sqrt(const PadicUnit& u) {
  const unsigned p = u.prime();
  const unsigned N = u.precision();
  if (!u.is_unit()) throw Error(ErrorKind::NonUnit, "square root of a non-unit");
  const u64 m = u.modulus();
  if (p == 2) {
    if (N < 3) throw Error(ErrorKind::InsufficientPrecision, "2-adic square test needs precision 3");
    if (u.residue() % 8 != 1) throw Error(ErrorKind::NotASquare, u.literal() + " is not 1 mod 8");
    u64 r = 1;
    for (unsigned j = 3; j < N; ++j) {
      u64 mj = u64(1) << (j + 1);
      if (mulmod(r, r, mj) != u.residue() % mj) r += u64(1) << (j - 1);
    }
    r %= m;
    u64 neg = (m - r) % m;
    u64 pick = (r % 8 <= neg % 8) ? r : neg;
    // r and r + 2^{N-1} have the same square; keep the smaller representative.
    if (N >= 4) {
      u64 alt = (pick + (m >> 1)) % m;
      if (mulmod(alt, alt, m) == u.residue() && alt < pick) pick = alt;
    }
    return PadicInt(p, N, pick);
  }
  u64 r0 = 0;
  for (u64 c = 1; c < p; ++c)
    if ((c * c) % p == u.residue() % p) {
      r0 = c;
      break;
    }
  if (r0 == 0) throw Error(ErrorKind::NotASquare, u.literal() + " is a non-residue");
  PadicInt r(p, N, r0);
  PadicInt two(p, N, 2);
  for (unsigned i = 0; i < N + 1; ++i) r = r - (r * r - u) * (two * r).invert();
  PadicInt nr = -r;
  return r.residue() <= nr.residue() ? r : nr;
}

std::pair<PadicUnit, PadicUnit> unit_decompose(const PadicUnit& u) {
  if (!u.is_unit()) throw Error(ErrorKind::NonUnit, "decomposing a non-unit");
  const unsigned p = u.prime();
  PadicUnit t;
  if (p == 2) {
    t = PadicInt::from_integer((u.precision() >= 2 && u.residue() % 4 == 3) ? -1 : 1, 2, u.precision());
  } else {
    t = teichmuller_lift(static_cast<unsigned>(u.residue() % p), p, u.precision());
  }
  return {t, u * t.invert()};
}

unsigned residue_datum(const PadicUnit& u, unsigned modulus) {
  const unsigned p = u.prime();
  bool ok = modulus == p * p || (p == 2 && modulus == 8);
  if (!ok) throw Error(ErrorKind::InvalidArgument, "modulus must be p^2 or 8");
  if (u.modulus() < modulus)
    throw Error(ErrorKind::InsufficientPrecision, "precision below the residue modulus");
  return static_cast<unsigned>(u.residue() % modulus);
}

}  // namespace stabforge
