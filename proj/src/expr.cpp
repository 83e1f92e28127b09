#include "dqv/expr.hpp"

#include <cctype>

namespace dqv {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const ModelPtr& model) : text_(text), model_(model) {}

  FormalSeries parse() {
    FormalSeries acc(model_);
    skip_ws();
    if (at_end()) throw ParseError("empty expression", pos_);
    int sign = read_sign_or(1);
    acc += sign * term();
    skip_ws();
    while (!at_end()) {
      char c = text_[pos_];
      if (c != '+' && c != '-') throw ParseError(std::string("unexpected token '") + c + "'", pos_);
      ++pos_;
      acc += (c == '-' ? Rational(-1) : Rational(1)) * term();
      skip_ws();
    }
    return acc;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  int read_sign_or(int dflt) {
    skip_ws();
    if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      int s = text_[pos_] == '-' ? -1 : 1;
      ++pos_;
      return s;
    }
    return dflt;
  }

  FormalSeries term() {
    FormalSeries acc = factor();
    skip_ws();
    while (!at_end() && text_[pos_] == '*') {
      ++pos_;
      acc = acc * factor();
      skip_ws();
    }
    return acc;
  }

  FormalSeries factor() {
    skip_ws();
    if (at_end()) throw ParseError("expected factor", pos_);
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return FormalSeries(model_, rational());
    if (std::isalpha(static_cast<unsigned char>(c))) return generator();
    throw ParseError(std::string("unexpected token '") + c + "'", pos_);
  }

  Rational rational() {
    std::string num = digits();
    if (!at_end() && text_[pos_] == '/') {
      ++pos_;
      std::string den = digits();
      if (den == "0") throw ParseError("zero denominator", pos_);
      return rational_from_string(num + "/" + den);
    }
    return rational_from_string(num);
  }

  std::string digits() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError("expected digits", pos_);
    return text_.substr(start, pos_ - start);
  }

  int integer() {
    int sign = 1;
    if (!at_end() && text_[pos_] == '-') {
      sign = -1;
      ++pos_;
    }
    return sign * std::stoi(digits());
  }

  FormalSeries generator() {
    std::size_t start = pos_;
    std::string name;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      name += text_[pos_];
      ++pos_;
    }
    std::string idx_digits;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      idx_digits += text_[pos_];
      ++pos_;
    }
    int exp = 1;
    if (!at_end() && text_[pos_] == '^') {
      ++pos_;
      exp = integer();
    }
    auto need_index = [&](const char* kind) {
      if (idx_digits.empty())
        throw ParseError(std::string(kind) + " generator needs an index", start);
      int i = std::stoi(idx_digits);
      if (i < 1 || i > model_->dim) throw ParseError("generator index out of range", start);
      return i;
    };
    if (name == "h") {
      if (!idx_digits.empty()) throw ParseError("'h' takes no index", start);
      if (exp < 0) throw ParseError("negative h power", start);
      return FormalSeries::hbar(model_, exp);
    }
    if (name == "t") {
      if (!idx_digits.empty()) throw ParseError("'t' takes no index", start);
      if (exp < 0) throw ParseError("negative t power", start);
      return FormalSeries::tvar(model_, exp);
    }
    if (name == "x" || name == "u") {
      bool torus = model_->kind == ModelKind::Torus;
      if (name == "x" && torus) throw ParseError("use u1..ud on the torus", start);
      if (name == "u" && !torus) throw ParseError("use x1..xd on the plane", start);
      if (!torus && exp < 0) throw ParseError("negative base exponent on the plane", start);
      if (torus && std::abs(exp) > model_->base_max)
        throw ParseError("torus mode exceeds K_max", start);
      return FormalSeries::coordinate(model_, need_index("base"), exp);
    }
    if (name == "y") {
      if (exp < 0) throw ParseError("negative fiber exponent", start);
      return FormalSeries::fiber(model_, need_index("fiber"), exp);
    }
    if (name == "th") {
      if (exp == 0) return FormalSeries::one(model_);
      if (exp != 1) throw ParseError("theta exponent must be 1", start);
      return FormalSeries::theta(model_, need_index("theta"));
    }
    throw ParseError("unknown generator '" + name + "'", start);
  }

  const std::string& text_;
  ModelPtr model_;
  std::size_t pos_ = 0;
};

}  // namespace

FormalSeries parse_series(const std::string& text, const ModelPtr& model) {
  return Parser(text, model).parse();
}

}  // namespace dqv
