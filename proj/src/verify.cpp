#include <dclut/verify.hpp>

#include <dclut/errors.hpp>

#include <algorithm>
#include <bitset>
#include <string>
#include <thread>

namespace dclut
{

verify_report verify_plan( lookup_table const& table, care_mask const& mask, plan const& p, unsigned threads )
{
  if ( mask.size() != table.size() )
  {
    throw usage_error( "mask has " + std::to_string( mask.size() ) + " entries but table has " + std::to_string( table.size() ) );
  }
  if ( p.input_bits() != table.input_bits() || p.output_bits() != table.output_bits() )
  {
    throw usage_error( "plan is " + std::to_string( p.input_bits() ) + "x" + std::to_string( p.output_bits() ) +
                       " bits but table is " + std::to_string( table.input_bits() ) + "x" +
                       std::to_string( table.output_bits() ) );
  }

  auto const size = table.size();
  auto const workers = std::clamp<std::size_t>( threads, 1, std::max<std::size_t>( 1, size / 4096 ) );
  std::vector<verify_report> parts( workers );
  auto check = [&]( std::size_t w ) {
    auto const begin = size * w / workers;
    auto const end = size * ( w + 1 ) / workers;
    auto& r = parts[w];
    for ( auto x = begin; x < end; ++x )
    {
      auto const v = evaluate( p, x );
      if ( v != table[x] )
      {
        if ( mask[x] )
          r.care_mismatches.push_back( x );
        else
          ++r.dont_cares_changed;
      }
      ++r.total_checked;
    }
  };
  if ( workers == 1 )
  {
    check( 0 );
  }
  else
  {
    std::vector<std::jthread> pool;
    for ( std::size_t w = 0; w < workers; ++w )
    {
      pool.emplace_back( check, w );
    }
  }

  verify_report report;
  for ( auto& part : parts )
  {
    report.care_mismatches.insert( report.care_mismatches.end(), part.care_mismatches.begin(), part.care_mismatches.end() );
    report.total_checked += part.total_checked;
    report.dont_cares_changed += part.dont_cares_changed;
  }
  return report;
}

namespace
{

constexpr std::size_t max_oracle_sub_tables = 256;
using cover_set = std::bitset<max_oracle_sub_tables>;

struct option
{
  std::size_t generator;
  cover_set members;
};

class exact_cover
{
public:
  exact_cover( std::size_t n, std::vector<option> options )
      : n_( n ), options_( std::move( options ) )
  {
    for ( std::size_t i = 0; i < n; ++i )
      all_.set( i );
    for ( auto const& o : options_ )
      largest_ = std::max( largest_, o.members.count() );
  }

  std::size_t solve()
  {
    best_ = n_; // every sub-table can always stand alone
    search( cover_set{}, std::vector<bool>( n_, false ), 0 );
    return best_;
  }

private:
  void search( cover_set covered, std::vector<bool> used, std::size_t count )
  {
    if ( covered == all_ )
    {
      best_ = std::min( best_, count );
      return;
    }
    auto const uncovered = n_ - covered.count();
    if ( count + ( uncovered + largest_ - 1 ) / largest_ >= best_ )
    {
      return;
    }

    /* branch on the uncovered element with the fewest usable options */
    std::size_t pick = n_;
    std::size_t fewest = options_.size() + 1;
    for ( std::size_t e = 0; e < n_; ++e )
    {
      if ( covered.test( e ) )
        continue;
      std::size_t k = 0;
      for ( auto const& o : options_ )
        if ( !used[o.generator] && o.members.test( e ) )
          ++k;
      if ( k < fewest )
      {
        fewest = k;
        pick = e;
      }
    }
    if ( fewest == 0 )
    {
      return;
    }

    std::vector<std::pair<std::size_t, std::size_t>> order; // (-gain, option)
    for ( std::size_t i = 0; i < options_.size(); ++i )
    {
      auto const& o = options_[i];
      if ( !used[o.generator] && o.members.test( pick ) )
        order.emplace_back( n_ - ( o.members & ~covered ).count(), i );
    }
    std::sort( order.begin(), order.end() );
    for ( auto const& [gain, i] : order )
    {
      auto const& o = options_[i];
      used[o.generator] = true;
      search( covered | o.members, used, count + 1 );
      used[o.generator] = false;
    }
  }

  std::size_t n_;
  std::vector<option> options_;
  cover_set all_;
  std::size_t largest_{ 1 };
  std::size_t best_{ 0 };
};

} // namespace

std::size_t oracle_min_ust( lookup_table const& table, care_mask const& mask, unsigned w_lb_in, unsigned w_st,
                            oracle_bounds const& bounds )
{
  if ( mask.size() != table.size() )
  {
    throw usage_error( "oracle: mask and table sizes differ" );
  }
  auto const w_in = table.input_bits();
  if ( w_in > bounds.max_input_bits || w_lb_in > bounds.max_sub_table_bits || w_lb_in < 1 || w_lb_in >= w_in )
  {
    throw bounds_error( "oracle: instance outside exhaustive bounds (w_in <= " + std::to_string( bounds.max_input_bits ) +
                        ", 1 <= w_lb_in <= " + std::to_string( bounds.max_sub_table_bits ) + ")" );
  }
  auto const dont_cares = mask.size() - mask.count_care();
  if ( dont_cares > bounds.max_dont_cares )
  {
    throw bounds_error( "oracle: " + std::to_string( dont_cares ) + " don't cares exceed the bound of " +
                        std::to_string( bounds.max_dont_cares ) );
  }

  std::size_t const m = std::size_t{ 1 } << w_lb_in;
  std::size_t const n = table.size() / m;
  if ( n > max_oracle_sub_tables )
  {
    throw bounds_error( "oracle: too many sub-tables" );
  }
  auto const limit = std::uint64_t{ 1 } << table.output_bits();
  auto const st_limit = std::uint64_t{ 1 } << w_st;

  std::vector<std::uint64_t> bias( n );
  std::vector<std::uint64_t> residual( table.size() );
  for ( std::size_t i = 0; i < n; ++i )
  {
    auto const first = table.values().begin() + static_cast<std::ptrdiff_t>( i * m );
    bias[i] = *std::min_element( first, first + static_cast<std::ptrdiff_t>( m ) );
    for ( std::size_t k = 0; k < m; ++k )
    {
      residual[i * m + k] = table[i * m + k] - bias[i];
      if ( mask[i * m + k] && residual[i * m + k] >= st_limit )
      {
        throw usage_error( "oracle: care residual does not fit in w_st bits" );
      }
    }
  }

  /* can the completed generator `c` produce sub-table j at some shift? */
  auto covers = [&]( std::vector<std::uint64_t> const& c, std::size_t j ) {
    for ( unsigned t = 0; t <= w_st; ++t )
    {
      bool ok = true;
      for ( std::size_t k = 0; k < m && ok; ++k )
      {
        auto const v = c[k] >> t;
        ok = mask[j * m + k] ? v == residual[j * m + k] : v + bias[j] < limit;
      }
      if ( ok )
        return true;
    }
    return false;
  };

  std::vector<option> options;
  std::uint64_t examined = 0;
  for ( std::size_t g = 0; g < n; ++g )
  {
    std::vector<std::size_t> free_pos;
    std::vector<std::uint64_t> domain_size;
    for ( std::size_t k = 0; k < m; ++k )
    {
      if ( !mask[g * m + k] )
      {
        free_pos.push_back( k );
        auto const room = limit - bias[g];
        domain_size.push_back( std::min( st_limit, room ) );
      }
    }

    std::vector<std::uint64_t> c( residual.begin() + static_cast<std::ptrdiff_t>( g * m ),
                                  residual.begin() + static_cast<std::ptrdiff_t>( ( g + 1 ) * m ) );
    for ( auto k : free_pos )
      c[k] = 0;

    std::vector<cover_set> sets;
    while ( true )
    {
      if ( ++examined > bounds.max_candidates )
      {
        throw bounds_error( "oracle: more than " + std::to_string( bounds.max_candidates ) + " generator completions" );
      }
      cover_set s;
      for ( std::size_t j = 0; j < n; ++j )
        if ( covers( c, j ) )
          s.set( j );
      sets.push_back( s );

      /* odometer over the free entries */
      std::size_t d = 0;
      for ( ; d < free_pos.size(); ++d )
      {
        if ( ++c[free_pos[d]] < domain_size[d] )
          break;
        c[free_pos[d]] = 0;
      }
      if ( d == free_pos.size() )
        break;
    }

    /* keep only the distinct maximal sets of this generator */
    std::sort( sets.begin(), sets.end(), []( cover_set const& a, cover_set const& b ) { return a.count() > b.count(); } );
    std::vector<cover_set> kept;
    for ( auto const& s : sets )
    {
      bool dominated = false;
      for ( auto const& k : kept )
      {
        if ( ( s & ~k ).none() )
        {
          dominated = true;
          break;
        }
      }
      if ( !dominated )
        kept.push_back( s );
    }
    for ( auto const& s : kept )
      options.push_back( { g, s } );
  }

  return exact_cover( n, std::move( options ) ).solve();
}

} // namespace dclut
