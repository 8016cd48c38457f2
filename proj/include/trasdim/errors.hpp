#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace trasdim {

// Machine-parsable error categories. The CLI prints them as `error[E_X]: msg`
// on a single line and exits 1.
enum class Errc {
  usage,           // bad flags / bad subcommand
  bad_json,        // malformed or schema-violating JSON input
  invariant,       // input violates a documented structural invariant
  dimension,       // block / length mismatch between points
  empty_input,     // an operation received an empty set it cannot define
  precondition,    // operation precondition violated
  budget,          // budget misuse or an oracle asked to exceed its bound
  ceiling,         // window point-count ceiling exceeded
  io,              // file read/write failure
  internal,        // solver self-check failed; indicates a bug
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::usage: return "E_USAGE";
    case Errc::bad_json: return "E_BADJSON";
    case Errc::invariant: return "E_INVARIANT";
    case Errc::dimension: return "E_DIM";
    case Errc::empty_input: return "E_EMPTY";
    case Errc::precondition: return "E_PRECOND";
    case Errc::budget: return "E_BUDGET";
    case Errc::ceiling: return "E_CEILING";
    case Errc::io: return "E_IO";
    case Errc::internal: return "E_INTERNAL";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace trasdim
