#pragma once

#include <dclut/search.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace dclut::cli
{

/* stable exit status contract */
inline constexpr int exit_ok = 0;
inline constexpr int exit_verify_failed = 1;
inline constexpr int exit_usage = 2;

struct search_flags
{
  std::optional<unsigned> output_bits;
  std::uint64_t exiguity{ default_exiguity };
  bool no_hbs{ false };
  bool no_ssc{ false };
  bool no_dc{ false };
  std::optional<unsigned> min_tsize;
  std::optional<unsigned> max_tsize;
  unsigned passes{ 1 };
  unsigned threads{ 1 };

  search_config to_config( unsigned w_in ) const;
};

struct compress_options
{
  std::filesystem::path table;
  std::optional<std::filesystem::path> mask;
  std::filesystem::path out{ "." };
  std::optional<std::string> name;
  search_flags search;
  bool json{ false };
};

struct mask_options
{
  std::filesystem::path observations;
  unsigned w_in{ 0 };
  std::filesystem::path out;
};

struct batch_options
{
  std::filesystem::path dir;
  std::filesystem::path out{ "." };
  search_flags search;
  bool compare{ false };
  bool json{ false };
};

struct verify_options
{
  std::filesystem::path table;
  std::optional<std::filesystem::path> mask;
  std::filesystem::path plan;
  std::optional<unsigned> output_bits;
  bool json{ false };
};

struct generate_options
{
  unsigned w_in{ 10 };
  unsigned w_out{ 8 };
  unsigned w_lb_in{ 3 };
  unsigned generators{ 4 };
  double dont_care{ 0.6 };
  std::uint64_t seed{ 1 };
  unsigned count{ 1 };
  std::filesystem::path out{ "." };
  std::string name{ "table" };
};

int cmd_compress( compress_options const& options, std::ostream& out, std::ostream& err );
int cmd_mask( mask_options const& options, std::ostream& out, std::ostream& err );
int cmd_batch( batch_options const& options, std::ostream& out, std::ostream& err );
int cmd_verify( verify_options const& options, std::ostream& out, std::ostream& err );
int cmd_generate( generate_options const& options, std::ostream& out, std::ostream& err );

/*! \brief Parses `argv` and dispatches to a subcommand. */
int run( int argc, char const* const* argv, std::ostream& out, std::ostream& err );

} // namespace dclut::cli
