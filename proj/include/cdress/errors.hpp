#ifndef CDRESS_ERRORS_HPP
#define CDRESS_ERRORS_HPP

#include <array>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cdress {

/// A field takes a value at a sample point where the construction is
/// undefined (singular tetrad, vanishing sigma, degenerate metric, ...).
class DegenerateField : public std::runtime_error {
 public:
  DegenerateField(const std::string& what, const std::array<double, 4>& where)
      : std::runtime_error(format(what, where)), where_(where) {}
  explicit DegenerateField(const std::string& what) : std::runtime_error(what), where_{} {}

  const std::array<double, 4>& where() const { return where_; }

 private:
  static std::string format(const std::string& what, const std::array<double, 4>& x) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at x = (" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << ")";
    return os.str();
  }
  std::array<double, 4> where_;
};

class ShapeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdress

#endif  // CDRESS_ERRORS_HPP
