#include <dclut/search.hpp>

#include <dclut/decompose.hpp>
#include <dclut/errors.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <tuple>

namespace dclut
{

std::vector<std::pair<unsigned, unsigned>> configurations( lookup_table const& table, search_config const& cfg )
{
  auto const w_in = table.input_bits();
  auto const w_out = table.output_bits();

  bit_range sub{ 2, w_in >= 4 ? w_in - 2 : 1 };
  if ( w_in < 4 )
  {
    sub = { 1, w_in - 1 }; // empty for w_in == 1
  }
  if ( cfg.sub_table_bits )
  {
    sub = *cfg.sub_table_bits;
    if ( sub.lo > sub.hi || sub.lo < 1 || sub.hi > w_in - 1 )
    {
      throw usage_error( "sub-table size range [" + std::to_string( sub.lo ) + ", " + std::to_string( sub.hi ) +
                         "] must be non-empty and within [1, " + std::to_string( w_in - 1 ) + "]" );
    }
  }

  bit_range low{ 0, w_out - 1 };
  if ( cfg.low_bits )
  {
    low = *cfg.low_bits;
    if ( low.lo > low.hi || low.hi > w_out - 1 )
    {
      throw usage_error( "low-bit split range [" + std::to_string( low.lo ) + ", " + std::to_string( low.hi ) +
                         "] must be non-empty and within [0, " + std::to_string( w_out - 1 ) + "]" );
    }
  }
  if ( !cfg.higher_bits )
  {
    low = { 0, 0 };
  }

  std::vector<std::pair<unsigned, unsigned>> result;
  for ( auto lb_in = sub.lo; lb_in <= sub.hi && lb_in < w_in; ++lb_in )
  {
    for ( auto lb_out = low.lo; lb_out <= low.hi; ++lb_out )
    {
      result.emplace_back( lb_in, lb_out );
    }
  }
  return result;
}

unsigned index_bits( decomposition const& d ) noexcept
{
  return ceil_log2( d.num_unique() );
}

unsigned shift_bits( decomposition const& d ) noexcept
{
  auto const all_equal = std::adjacent_find( d.t_rsh.begin(), d.t_rsh.end(), std::not_equal_to<>() ) == d.t_rsh.end();
  return all_equal ? 0u : ceil_log2( std::uint64_t{ d.w_st } + 1 );
}

component_bits bit_breakdown( plan const& p )
{
  component_bits bits;
  if ( p.is_plain() )
  {
    bits.plain = static_cast<std::uint64_t>( p.plain().size() ) * p.plain().output_bits();
    return bits;
  }
  auto const& d = p.compressed();
  auto const n = static_cast<std::uint64_t>( d.num_sub_tables() );
  bits.lb = ( std::uint64_t{ 1 } << d.w_in ) * d.w_lb_out;
  bits.bias = n * d.high_bits_width();
  bits.idx = n * index_bits( d );
  bits.rsh = n * shift_bits( d );
  bits.ust = static_cast<std::uint64_t>( d.num_unique() ) * d.sub_table_size() * d.w_st;
  return bits;
}

std::uint64_t cost_bits( plan const& p )
{
  return bit_breakdown( p ).total();
}

std::uint64_t cost_pluts( plan const& p, unsigned k )
{
  if ( k < 2 )
  {
    throw usage_error( "P-LUT input count must be at least 2" );
  }
  auto table_cost = [k]( unsigned address_bits, unsigned data_bits ) -> std::uint64_t {
    if ( data_bits == 0 )
    {
      return 0;
    }
    auto const per_bit = address_bits > k ? std::uint64_t{ 1 } << ( address_bits - k ) : std::uint64_t{ 1 };
    return data_bits * per_bit;
  };

  if ( p.is_plain() )
  {
    return table_cost( p.plain().input_bits(), p.plain().output_bits() );
  }
  auto const& d = p.compressed();
  auto const hb_addr = d.w_in - d.w_lb_in;
  auto const idx = index_bits( d );
  auto const rsh = shift_bits( d );
  auto const hb = d.high_bits_width();

  std::uint64_t total = table_cost( d.w_in, d.w_lb_out ) + table_cost( hb_addr, hb ) + table_cost( hb_addr, idx ) +
                        table_cost( hb_addr, rsh ) + table_cost( idx + d.w_lb_in, d.w_st );
  unsigned stages = 0;
  if ( d.w_st > 0 )
  {
    ++stages; // bias adder
    if ( rsh > 0 )
    {
      ++stages; // variable shifter
    }
  }
  return total + std::uint64_t{ stages } * hb;
}

configuration_result run_configuration( lookup_table const& table, care_mask const& mask, unsigned w_lb_in,
                                        unsigned w_lb_out, search_config const& cfg )
{
  if ( mask.size() != table.size() )
  {
    throw usage_error( "mask has " + std::to_string( mask.size() ) + " entries but table has " + std::to_string( table.size() ) );
  }
  auto const hb_table = w_lb_out == 0 ? table : high_bits( table, w_lb_out );
  auto split = split_bias( hb_table, w_lb_in );

  auto state = cfg.self_similarity ? select_unique( similarity_matrix( split.residuals, split.w_st ) )
                                   : trivial_selection( split.residuals.count() );

  configuration_result result;
  result.greedy = assemble( table, w_lb_in, w_lb_out, split, state );
  result.ust_before = state.i_ust.size();
  result.ust_after = result.ust_before;

  bool const has_dont_care = mask.count_care() < mask.size();
  if ( !cfg.dont_cares || !cfg.self_similarity || !has_dont_care || cfg.passes == 0 )
  {
    return result;
  }

  auto reduced = reduce_unique( std::move( state ), split.residuals, freeze_mask::from_care_mask( mask ),
                                reduce_options{ cfg.exiguity, cfg.passes }, split.w_st, hb_table.output_bits(),
                                split.bias );
  result.ust_after = reduced.state.i_ust.size();
  if ( result.ust_after < result.ust_before )
  {
    bias_split rewritten{ std::move( reduced.residuals ), split.bias, split.w_st };
    result.reduced = assemble( table, w_lb_in, w_lb_out, rewritten, reduced.state );
  }
  return result;
}

namespace
{

struct candidate
{
  plan body;
  config_cost cost;
};

auto ranking_key( config_cost const& c )
{
  return std::make_tuple( c.total_bits, c.pluts, c.w_lb_in, c.w_lb_out );
}

candidate evaluate_configuration( lookup_table const& table, care_mask const& mask, unsigned w_lb_in, unsigned w_lb_out,
                                  search_config const& cfg )
{
  auto r = run_configuration( table, mask, w_lb_in, w_lb_out, cfg );
  plan_config const pc{ w_lb_in, w_lb_out, cfg.exiguity };

  candidate best{ plan( std::move( r.greedy ), pc ), {} };
  best.cost.w_lb_in = w_lb_in;
  best.cost.w_lb_out = w_lb_out;
  best.cost.ust_before = r.ust_before;
  best.cost.ust_after = r.ust_after;
  best.cost.bits = bit_breakdown( best.body );
  best.cost.total_bits = best.cost.bits.total();
  best.cost.pluts = cost_pluts( best.body, cfg.plut_inputs );

  if ( r.reduced )
  {
    plan alt( std::move( *r.reduced ), pc );
    auto const bits = bit_breakdown( alt );
    auto const pluts = cost_pluts( alt, cfg.plut_inputs );
    if ( std::make_pair( bits.total(), pluts ) < std::make_pair( best.cost.total_bits, best.cost.pluts ) )
    {
      best.body = std::move( alt );
      best.cost.bits = bits;
      best.cost.total_bits = bits.total();
      best.cost.pluts = pluts;
      best.cost.reduced_kept = true;
    }
  }
  return best;
}

} // namespace

compress_result compress( lookup_table const& table, care_mask const& mask, search_config const& cfg )
{
  if ( mask.size() != table.size() )
  {
    throw usage_error( "mask has " + std::to_string( mask.size() ) + " entries but table has " + std::to_string( table.size() ) );
  }
  auto const configs = configurations( table, cfg );

  std::vector<std::optional<candidate>> results( configs.size() + 1 );
  {
    candidate plain{ plan( table, plan_config{ 0, 0, cfg.exiguity } ), {} };
    plain.cost.plain = true;
    plain.cost.bits = bit_breakdown( plain.body );
    plain.cost.total_bits = plain.cost.bits.total();
    plain.cost.pluts = cost_pluts( plain.body, cfg.plut_inputs );
    results[0] = std::move( plain );
  }

  std::vector<std::exception_ptr> errors( configs.size() );
  std::atomic<std::size_t> next{ 0 };
  auto worker = [&]() {
    for ( auto i = next++; i < configs.size(); i = next++ )
    {
      try
      {
        results[i + 1] = evaluate_configuration( table, mask, configs[i].first, configs[i].second, cfg );
      }
      catch ( ... )
      {
        errors[i] = std::current_exception();
      }
    }
  };

  auto const workers = std::clamp<std::size_t>( cfg.threads, 1, std::max<std::size_t>( 1, configs.size() ) );
  if ( workers == 1 )
  {
    worker();
  }
  else
  {
    std::vector<std::jthread> pool;
    for ( std::size_t w = 0; w < workers; ++w )
    {
      pool.emplace_back( worker );
    }
  }
  for ( auto const& e : errors )
  {
    if ( e )
    {
      std::rethrow_exception( e );
    }
  }

  compress_result out;
  out.report.configs.reserve( results.size() );
  std::size_t best = 0;
  for ( std::size_t i = 0; i < results.size(); ++i )
  {
    out.report.configs.push_back( results[i]->cost );
    if ( ranking_key( results[i]->cost ) < ranking_key( results[best]->cost ) )
    {
      best = i;
    }
  }
  out.report.chosen = best;
  out.chosen = std::move( results[best]->body );
  return out;
}

} // namespace dclut
