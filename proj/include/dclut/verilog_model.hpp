/*!
  \file verilog_model.hpp
  \brief Interpreter for the combinational Verilog subset produced by `emit_verilog`

  Understands a module with one `address` input and one `data` output,
  `wire` declarations with initializers, `reg` + `always @(*) case` ROMs and
  `assign data = ...`. Expressions: identifiers, part selects, sized and
  unsized literals, `{a, b}` concatenation, `+`, `>>` and parentheses.
  Statements are evaluated in source order; an identifier used before it is
  driven is an error. Anything else raises `parse_error`.

  It shares no code with `evaluate`, which makes it an independent check of
  the emitted text.
*/
#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

namespace dclut
{

class verilog_model
{
public:
  explicit verilog_model( std::string_view text );
  ~verilog_model();
  verilog_model( verilog_model&& ) noexcept;
  verilog_model& operator=( verilog_model&& ) noexcept;

  unsigned input_bits() const noexcept;
  unsigned output_bits() const noexcept;

  /*! \brief Value of `data` for the given `address`. */
  std::uint64_t evaluate( std::uint64_t address ) const;

private:
  struct impl;
  std::unique_ptr<impl> impl_;
};

} // namespace dclut
