#include "contestlab/value.hpp"

#include <sstream>

namespace contestlab {

Symbol Value::as_symbol() const {
  if (kind_ != Kind::kSymbol) throw ContractViolation("value is not a symbol");
  return static_cast<Symbol>(scalar_);
}

bool Value::as_bool() const {
  if (kind_ != Kind::kBool) throw ContractViolation("value is not a boolean");
  return scalar_ != 0;
}

std::int64_t Value::as_int() const {
  if (kind_ != Kind::kInt) {
    throw ContractViolation("value is not an integer: " + ToString());
  }
  return scalar_;
}

const std::vector<Value>& Value::items() const {
  if (kind_ != Kind::kSeq) {
    throw ContractViolation("value is not a sequence: " + ToString());
  }
  return items_;
}

void Value::HashInto(Fingerprinter& fp) const {
  fp.AddByte(static_cast<std::uint8_t>(kind_));
  if (kind_ == Kind::kSeq) {
    fp.AddInt(static_cast<std::int64_t>(items_.size()));
    for (const auto& item : items_) item.HashInto(fp);
  } else {
    fp.AddInt(scalar_);
  }
}

std::string_view SymbolName(Symbol s) {
  switch (s) {
    case Symbol::kAck:
      return "ack";
    case Symbol::kFalse:
      return "false";
    case Symbol::kBottom:
      return "bot";
    case Symbol::kEmpty:
      return "empty";
  }
  return "?";
}

std::string Value::ToString() const {
  switch (kind_) {
    case Kind::kSymbol:
      return "#" + std::string(SymbolName(as_symbol()));
    case Kind::kBool:
      return scalar_ ? "true" : "false";
    case Kind::kInt:
      return std::to_string(scalar_);
    case Kind::kSeq: {
      std::ostringstream os;
      os << '[';
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) os << ',';
        os << items_[i].ToString();
      }
      os << ']';
      return os.str();
    }
  }
  return "?";
}

bool operator==(const Value& a, const Value& b) {
  return a.kind_ == b.kind_ && a.scalar_ == b.scalar_ && a.items_ == b.items_;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  if (auto c = a.scalar_ <=> b.scalar_; c != 0) return c;
  return CompareSeq(a.items_, b.items_);
}

}  // namespace contestlab
