#ifndef SSHOM_COMMON_H_
#define SSHOM_COMMON_H_

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sshom {

// Dense index of a first-order mutant within a catalog, assigned in source
// order. Displayed as m<index+1>.
enum class MutantId : std::uint32_t {};

constexpr std::uint32_t index(MutantId m) { return static_cast<std::uint32_t>(m); }
constexpr MutantId mutantAt(std::size_t i) { return MutantId{static_cast<std::uint32_t>(i)}; }

std::string mutantName(MutantId m);

using MutantSet = std::vector<MutantId>;  // sorted ascending, no duplicates
using TestSet = std::set<std::string>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class DigestMismatch : public Error {
 public:
  using Error::Error;
};

class ConflictingSelection : public Error {
 public:
  using Error::Error;
};

class UnknownVariable : public Error {
 public:
  using Error::Error;
};

class UnknownMutant : public Error {
 public:
  using Error::Error;
};

class OracleLimitExceeded : public Error {
 public:
  using Error::Error;
};

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string contentDigest(std::string_view text);

}  // namespace sshom

#endif  // SSHOM_COMMON_H_
