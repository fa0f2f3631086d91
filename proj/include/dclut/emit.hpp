/*!
  \file emit.hpp
  \brief Verilog generation, plan files and report rendering

  Plan file layout (UTF-8, `\n` line ends):

      dclut-plan 1
      kind compressed            | kind plain
      w_in <n>
      w_out <n>
      config <w_lb_in> <w_lb_out> <exiguity>
      w_lb_in <n>                (compressed only)
      w_lb_out <n>               (compressed only)
      w_st <n>                   (compressed only)
      table <name> <count>       followed by ceil(count / 16) lines of hex values
      ...                        plain: values; compressed: t_lb t_bias t_idx t_rsh t_ust
      report <entries> <chosen>
      entry <key=value ...>      one per report entry
      end
*/
#pragma once

#include <dclut/search.hpp>
#include <dclut/table.hpp>

#include <string>
#include <string_view>
#include <utility>

namespace dclut
{

bool is_verilog_identifier( std::string_view name ) noexcept;

/*! \brief A combinational Verilog-2001 module `name(address, data)` implementing `p`.

  Every stored table becomes a full `case` ROM; the datapath concatenates
  index and low address bits, shifts, adds the bias and appends the plain
  low bits. Output is deterministic. Throws `usage_error` for a bad name.
*/
std::string emit_verilog( plan const& p, std::string_view module_name );

std::string emit_plan_file( plan const& p, cost_report const& report );

/*! \brief Inverse of `emit_plan_file`; throws `parse_error` with a line number. */
std::pair<plan, cost_report> load_plan_file( std::string_view text );

std::string render_report_text( cost_report const& report );
std::string render_report_json( cost_report const& report, int indent = 2 );

} // namespace dclut
