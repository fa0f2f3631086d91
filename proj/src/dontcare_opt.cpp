#include <dclut/dontcare_opt.hpp>

#include <dclut/errors.hpp>

#include <algorithm>

namespace dclut
{

freeze_mask freeze_mask::from_care_mask( care_mask const& mask )
{
  return freeze_mask{ std::vector<std::uint8_t>( mask.flags().begin(), mask.flags().end() ) };
}

std::optional<match_result> match_with_dontcares( std::span<std::uint64_t const> target,
                                                  std::span<std::uint8_t const> target_frozen,
                                                  std::span<std::uint64_t const> generator, unsigned w_st,
                                                  unsigned w_out_hb, std::uint64_t bias )
{
  if ( target.size() != generator.size() || target.size() != target_frozen.size() )
  {
    throw usage_error( "match_with_dontcares: sub-table sizes differ" );
  }
  auto const limit = std::uint64_t{ 1 } << w_out_hb;
  for ( unsigned t = 0; t <= w_st; ++t )
  {
    bool ok = true;
    for ( std::size_t k = 0; k < target.size() && ok; ++k )
    {
      auto const v = t >= 64 ? 0 : generator[k] >> t;
      ok = target_frozen[k] ? v == target[k] : v + bias < limit;
    }
    if ( ok )
    {
      match_result result{ t, {} };
      result.rewritten.reserve( generator.size() );
      for ( auto g : generator )
      {
        result.rewritten.push_back( t >= 64 ? 0 : g >> t );
      }
      return result;
    }
  }
  return std::nullopt;
}

dontcare_optimizer::dontcare_optimizer( similarity_state state, sub_tables residuals, freeze_mask freeze,
                                        std::vector<std::uint64_t> bias, unsigned w_st, unsigned w_out_hb )
    : state_( std::move( state ) ),
      residuals_( std::move( residuals ) ),
      freeze_( std::move( freeze ) ),
      bias_( std::move( bias ) ),
      w_st_( w_st ),
      w_out_hb_( w_out_hb )
{
  if ( freeze_.frozen.size() != residuals_.values.size() || bias_.size() != residuals_.count() ||
       state_.n != residuals_.count() )
  {
    throw usage_error( "dontcare_optimizer: residuals, freeze mask, biases and state disagree in size" );
  }
}

std::vector<std::size_t> dontcare_optimizer::generators_excluding( std::size_t candidate ) const
{
  std::vector<std::pair<std::size_t, std::size_t>> keyed; // (dependency count, index)
  keyed.reserve( state_.i_ust.size() );
  for ( auto u : state_.i_ust )
  {
    if ( u != candidate )
    {
      keyed.emplace_back( state_.dependency_count( u ), u );
    }
  }
  std::sort( keyed.begin(), keyed.end(), []( auto const& a, auto const& b ) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  } );
  std::vector<std::size_t> order;
  order.reserve( keyed.size() );
  for ( auto const& [count, u] : keyed )
  {
    order.push_back( u );
  }
  return order;
}

bool dontcare_optimizer::has_unfrozen( std::size_t sub_table ) const
{
  auto const m = residuals_.entries();
  auto const begin = freeze_.frozen.begin() + static_cast<std::ptrdiff_t>( sub_table * m );
  return std::find( begin, begin + static_cast<std::ptrdiff_t>( m ), std::uint8_t{ 0 } ) != begin + static_cast<std::ptrdiff_t>( m );
}

void dontcare_optimizer::write( std::size_t position, std::uint64_t value )
{
  if ( residuals_.values[position] == value )
  {
    return;
  }
  if ( freeze_.frozen[position] )
  {
    throw invariant_error( "dontcare_optimizer: attempted to rewrite a frozen entry" );
  }
  undo_.push_back( { position, residuals_.values[position], freeze_.frozen[position] } );
  residuals_.values[position] = value;
}

void dontcare_optimizer::freeze_sub_table( std::size_t sub_table )
{
  auto const m = residuals_.entries();
  for ( auto p = sub_table * m; p < ( sub_table + 1 ) * m; ++p )
  {
    if ( !freeze_.frozen[p] )
    {
      undo_.push_back( { p, residuals_.values[p], 0u } );
      freeze_.frozen[p] = 1u;
    }
  }
}

void dontcare_optimizer::apply( std::size_t target, match_result const& match )
{
  auto const m = residuals_.entries();
  for ( std::size_t k = 0; k < m; ++k )
  {
    write( target * m + k, match.rewritten[k] );
  }
}

void dontcare_optimizer::rollback( std::size_t mark )
{
  while ( undo_.size() > mark )
  {
    auto const& e = undo_.back();
    residuals_.values[e.position] = e.value;
    freeze_.frozen[e.position] = e.frozen;
    undo_.pop_back();
  }
}

std::optional<unsigned> dontcare_optimizer::rehome( std::size_t sub_table, std::vector<std::size_t> const& generators,
                                                    std::size_t& chosen )
{
  auto const m = residuals_.entries();
  auto const target = residuals_[sub_table];

  for ( auto u : generators )
  {
    for ( unsigned t = 0; t <= w_st_; ++t )
    {
      if ( generates( residuals_[u], target, t ) )
      {
        chosen = u;
        freeze_sub_table( sub_table );
        freeze_sub_table( u );
        return t;
      }
    }
  }

  auto const frozen = std::span<std::uint8_t const>( freeze_.frozen ).subspan( sub_table * m, m );
  for ( auto u : generators )
  {
    if ( auto match = match_with_dontcares( target, frozen, residuals_[u], w_st_, w_out_hb_, bias_[sub_table] ) )
    {
      chosen = u;
      apply( sub_table, *match );
      freeze_sub_table( sub_table );
      freeze_sub_table( u );
      return match->shift;
    }
  }
  return std::nullopt;
}

bool dontcare_optimizer::try_eliminate( std::size_t candidate )
{
  if ( candidate >= state_.n || !state_.is_unique( candidate ) || !has_unfrozen( candidate ) )
  {
    return false;
  }

  auto const m = residuals_.entries();
  auto const generators = generators_excluding( candidate );
  auto const deps_it = state_.deps.find( candidate );
  auto const dependents = deps_it == state_.deps.end() ? std::vector<dependent>{} : deps_it->second;

  for ( auto g : generators )
  {
    auto const frozen = std::span<std::uint8_t const>( freeze_.frozen ).subspan( candidate * m, m );
    auto match = match_with_dontcares( residuals_[candidate], frozen, residuals_[g], w_st_, w_out_hb_, bias_[candidate] );
    if ( !match )
    {
      continue;
    }

    auto const mark = undo_.size();
    apply( candidate, *match );
    freeze_sub_table( candidate );
    freeze_sub_table( g );

    std::vector<std::pair<std::size_t, dependent>> moved; // (new generator, dependent)
    bool ok = true;
    for ( auto const& d : dependents )
    {
      std::size_t chosen = 0;
      auto shift = rehome( d.index, generators, chosen );
      if ( !shift )
      {
        ok = false;
        break;
      }
      moved.push_back( { chosen, { d.index, *shift } } );
    }

    if ( !ok )
    {
      rollback( mark );
      continue;
    }

    auto insert_sorted = [this]( std::size_t u, dependent d ) {
      auto& list = state_.deps[u];
      auto it = std::lower_bound( list.begin(), list.end(), d.index,
                                  []( dependent const& a, std::size_t index ) { return a.index < index; } );
      list.insert( it, d );
    };
    state_.i_ust.erase( std::find( state_.i_ust.begin(), state_.i_ust.end(), candidate ) );
    state_.deps.erase( candidate );
    insert_sorted( g, { candidate, match->shift } );
    for ( auto const& [u, d] : moved )
    {
      insert_sorted( u, d );
    }
    undo_.clear();
    return true;
  }
  return false;
}

std::size_t dontcare_optimizer::run_pass( std::uint64_t exiguity )
{
  std::vector<std::pair<std::size_t, std::size_t>> order; // (dependency count, index)
  for ( auto u : state_.i_ust )
  {
    order.emplace_back( state_.dependency_count( u ), u );
  }
  std::sort( order.begin(), order.end() );

  std::size_t eliminated = 0;
  for ( auto const& [initial_count, u] : order )
  {
    if ( state_.is_unique( u ) && state_.dependency_count( u ) <= exiguity && try_eliminate( u ) )
    {
      ++eliminated;
    }
  }
  return eliminated;
}

reduce_result reduce_unique( similarity_state state, sub_tables residuals, freeze_mask freeze,
                             reduce_options const& options, unsigned w_st, unsigned w_out_hb,
                             std::span<std::uint64_t const> bias )
{
  dontcare_optimizer opt( std::move( state ), std::move( residuals ), std::move( freeze ),
                          std::vector<std::uint64_t>( bias.begin(), bias.end() ), w_st, w_out_hb );
  for ( unsigned pass = 0; pass < options.passes; ++pass )
  {
    if ( opt.run_pass( options.exiguity ) == 0 )
    {
      break;
    }
  }
  reduce_result result;
  result.state = std::move( opt ).take_state();
  result.residuals = std::move( opt ).take_residuals();
  result.freeze = std::move( opt ).take_freeze();
  return result;
}

} // namespace dclut
