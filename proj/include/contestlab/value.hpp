#ifndef CONTESTLAB_VALUE_HPP_
#define CONTESTLAB_VALUE_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace contestlab {

/// Thrown when a caller breaks a documented precondition. This signals a
/// broken algorithm definition or a malformed request, never a property of
/// the explored executions.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Thrown when an exploration or enumeration exceeds its configured cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 64-bit FNV-1a. Used for configuration fingerprints, which must be stable
/// across runs and platforms (DOT node ids are derived from them).
class Fingerprinter {
 public:
  void AddByte(std::uint8_t b) {
    hash_ ^= b;
    hash_ *= 0x100000001b3ULL;
  }
  void AddInt(std::int64_t v) {
    auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) AddByte(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  void AddString(std::string_view s) {
    AddInt(static_cast<std::int64_t>(s.size()));
    for (char c : s) AddByte(static_cast<std::uint8_t>(c));
  }
  std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

/// Distinguished non-numeric values. `kFalse` is the contest "no winner"
/// answer and the initial content of the contest register; it is kept apart
/// from the boolean false a test&set holds.
enum class Symbol : std::uint8_t { kAck, kFalse, kBottom, kEmpty };

/// A value of the closed per-run universe: symbols, booleans, integers and
/// finite sequences of values. Totally ordered and hashable so that
/// configurations can be memoized and witnesses tie-broken reproducibly.
class Value {
 public:
  enum class Kind : std::uint8_t { kSymbol, kBool, kInt, kSeq };

  Value() = default;  // ack

  static Value Ack() { return Value(); }
  static Value False() { return Sym(Symbol::kFalse); }
  static Value Bottom() { return Sym(Symbol::kBottom); }
  static Value Empty() { return Sym(Symbol::kEmpty); }
  static Value Sym(Symbol s) {
    Value v;
    v.kind_ = Kind::kSymbol;
    v.scalar_ = static_cast<std::int64_t>(s);
    return v;
  }
  static Value Bool(bool b) {
    Value v;
    v.kind_ = Kind::kBool;
    v.scalar_ = b ? 1 : 0;
    return v;
  }
  static Value Int(std::int64_t i) {
    Value v;
    v.kind_ = Kind::kInt;
    v.scalar_ = i;
    return v;
  }
  static Value Seq(std::vector<Value> items) {
    Value v;
    v.kind_ = Kind::kSeq;
    v.items_ = std::move(items);
    return v;
  }

  Kind kind() const { return kind_; }
  bool is_symbol() const { return kind_ == Kind::kSymbol; }
  bool is_symbol(Symbol s) const {
    return kind_ == Kind::kSymbol && scalar_ == static_cast<std::int64_t>(s);
  }
  bool is_bool() const { return kind_ == Kind::kBool; }
  bool is_int() const { return kind_ == Kind::kInt; }
  bool is_seq() const { return kind_ == Kind::kSeq; }

  Symbol as_symbol() const;
  bool as_bool() const;
  std::int64_t as_int() const;
  const std::vector<Value>& items() const;

  void HashInto(Fingerprinter& fp) const;
  std::string ToString() const;

  friend bool operator==(const Value& a, const Value& b);
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  Kind kind_ = Kind::kSymbol;
  std::int64_t scalar_ = 0;
  std::vector<Value> items_;
};

std::string_view SymbolName(Symbol s);

template <class T>
std::uint64_t FingerprintOf(const T& x) {
  Fingerprinter fp;
  x.HashInto(fp);
  return fp.digest();
}

/// Lexicographic comparison over vectors of three-way comparable elements.
template <class T>
std::strong_ordering CompareSeq(const std::vector<T>& a,
                                const std::vector<T>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return a.size() <=> b.size();
}

}  // namespace contestlab

template <>
struct std::hash<contestlab::Value> {
  std::size_t operator()(const contestlab::Value& v) const {
    return static_cast<std::size_t>(contestlab::FingerprintOf(v));
  }
};

#endif  // CONTESTLAB_VALUE_HPP_
