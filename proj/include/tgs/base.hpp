#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace tgs {

// JSON with insertion-ordered keys; all exported artifacts must be
// byte-deterministic, so every serializer in this project uses ojson.
using ojson = nlohmann::ordered_json;

// Subsets of a model carrier (ideals, multiplicative systems) and subsets of
// the prime list are bitmasks. Carrier sizes are tiny; 64 bits is a hard cap.
using Mask = std::uint64_t;

constexpr int kMaxCarrier = 64;

inline bool mask_has(Mask m, int i) { return (m >> i) & 1u; }
inline Mask mask_bit(int i) { return Mask{1} << i; }
inline Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }
inline int mask_count(Mask m) { return __builtin_popcountll(m); }

class TgsError : public std::runtime_error {
public:
  explicit TgsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input: bad table shapes, out-of-range entries, unreadable files.
class StructuralError : public TgsError {
public:
  using TgsError::TgsError;
};

// An operation was invoked outside its stated precondition.
class PreconditionError : public TgsError {
public:
  using TgsError::TgsError;
};

// A configurable budget would be exceeded; message carries the arithmetic.
class BudgetError : public TgsError {
public:
  using TgsError::TgsError;
};

// Checkpoint/resume state is unusable (corrupt or mismatched).
class CheckpointError : public TgsError {
public:
  using TgsError::TgsError;
};

// A quotient construction produced ill-defined operations. The violating
// representatives travel in `detail`; callers either surface this as a
// finding or abort, but never use the quotient.
class InvalidQuotientError : public TgsError {
public:
  InvalidQuotientError(const std::string& msg, ojson d)
      : TgsError(msg), detail(std::move(d)) {}
  ojson detail;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 1469598103934665603ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

inline std::string mask_to_hex(Mask m) {
  if (m == 0) return "0";
  static const char* digits = "0123456789abcdef";
  std::string s;
  while (m) {
    s.insert(s.begin(), digits[m & 0xf]);
    m >>= 4;
  }
  return s;
}

inline Mask mask_from_hex(const std::string& s) {
  if (s.empty()) throw StructuralError("empty bitset literal");
  Mask m = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw StructuralError(std::string("bad bitset literal: ") + s);
    if (m >> 60) throw StructuralError("bitset literal too wide: " + s);
    m = (m << 4) | static_cast<Mask>(d);
  }
  return m;
}

}  // namespace tgs
