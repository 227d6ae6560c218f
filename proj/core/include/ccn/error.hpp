#pragma once

#include <stdexcept>
#include <string>

namespace ccn {

/// Reason codes for ccn::Error. Stable across releases; the CLI maps them to
/// exit status 2 (malformed input) or surfaces them in reports.
enum class Errc {
  duplicate_id,
  dangling_endpoint,
  color_mismatch,
  unknown_node,
  not_a_morphism,
  color_not_preserved,
  unmapped_element,
  domain_mismatch,
  not_etale,
  too_large,
  invalid_partition,
  not_balanced,
  missing_color_dim,
  dimension_mismatch,
  syntax_error,
  unknown_function,
  unbound_variable,
  arity_mismatch,
  out_of_range_variable,
  nonzero_module_on_leafless_class,
  group_too_large,
  phase_mismatch,
  not_essentially_surjective,
  block_shape_mismatch,
  asymmetric_blocks,
  shape_mismatch,
  not_injective,
  non_finite_state,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ccn
