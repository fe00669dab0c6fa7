#include "migopt/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace migopt
{

namespace
{

std::uint32_t layer_input( const Hyperparams& hp, std::uint32_t layer )
{
  return layer == 0 ? kBaseFeatures : hp.hidden;
}

std::uint32_t message_dim( std::uint32_t input )
{
  return kMessageSlots * ( input + 1 );
}

void validate( const Hyperparams& hp )
{
  if ( hp.layers < 1 || hp.hidden < 4 )
  {
    throw std::invalid_argument( "hyperparameters require layers >= 1 and hidden >= 4" );
  }
}

Eigen::MatrixXd base_features( const Neighborhood& view )
{
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero( kBaseFeatures, static_cast<Eigen::Index>( view.size() ) );
  for ( std::size_t i = 0; i < view.size(); ++i )
  {
    const auto col = static_cast<Eigen::Index>( i );
    x( 0, col ) = i == 0 ? 1.0 : 0.0;
    x( 1, col ) = view.kinds[i] == NodeKind::PrimaryInput ? 1.0 : 0.0;
    x( 2, col ) = view.kinds[i] == NodeKind::Const0 ? 1.0 : 0.0;
    x( 3, col ) = view.kinds[i] == NodeKind::Majority ? 1.0 : 0.0;
  }
  return x;
}

// Messages for the first `active` nodes from features `h` (input x view size).
Eigen::MatrixXd build_messages( const Neighborhood& view, const Eigen::MatrixXd& h, std::size_t active )
{
  const auto input = h.rows();
  const auto slot = input + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero( kMessageSlots * slot, static_cast<Eigen::Index>( active ) );
  for ( std::size_t i = 0; i < active; ++i )
  {
    const auto col = static_cast<Eigen::Index>( i );
    for ( std::size_t p = 0; p < 3; ++p )
    {
      const auto& e = view.fanins[i][p];
      if ( e.local < 0 )
      {
        continue;
      }
      const auto off = static_cast<Eigen::Index>( p ) * slot;
      m.block( off, col, input, 1 ) = h.col( e.local );
      m( off + input, col ) = e.polarity;
    }
    for ( std::size_t k = 0; k < 3; ++k )
    {
      const auto off = static_cast<Eigen::Index>( 3 + k ) * slot;
      for ( const auto& e : view.fanout_bins[i][k] )
      {
        m.block( off, col, input, 1 ) += h.col( e.local );
        m( off + input, col ) += e.polarity;
      }
    }
  }
  return m;
}

} // namespace

std::size_t parameter_count( const Hyperparams& hp )
{
  const std::size_t h = hp.hidden;
  const std::size_t first = message_dim( kBaseFeatures ) * h + h;
  const std::size_t rest = ( hp.layers - 1 ) * ( message_dim( hp.hidden ) * h + h );
  return first + rest + kActionCount * h + kActionCount;
}

PolicyParams PolicyParams::zeros( const Hyperparams& hp )
{
  validate( hp );
  PolicyParams p;
  p.hp = hp;
  for ( std::uint32_t l = 0; l < hp.layers; ++l )
  {
    p.weights.push_back( Eigen::MatrixXd::Zero( hp.hidden, message_dim( layer_input( hp, l ) ) ) );
    p.biases.push_back( Eigen::VectorXd::Zero( hp.hidden ) );
  }
  p.head_weight = Eigen::MatrixXd::Zero( kActionCount, hp.hidden );
  p.head_bias = Eigen::VectorXd::Zero( kActionCount );
  return p;
}

PolicyParams PolicyParams::initialize( const Hyperparams& hp, std::uint64_t seed )
{
  auto p = zeros( hp );
  std::mt19937_64 rng( seed );
  auto fill = [&rng]( Eigen::MatrixXd& w ) {
    const double bound = 1.0 / std::sqrt( static_cast<double>( w.cols() ) );
    for ( Eigen::Index c = 0; c < w.cols(); ++c )
    {
      for ( Eigen::Index r = 0; r < w.rows(); ++r )
      {
        w( r, c ) = ( 2.0 * uniform01( rng ) - 1.0 ) * bound;
      }
    }
  };
  for ( auto& w : p.weights )
  {
    fill( w );
  }
  fill( p.head_weight );
  return p;
}

std::size_t PolicyParams::size() const
{
  std::size_t n = static_cast<std::size_t>( head_weight.size() + head_bias.size() );
  for ( std::size_t l = 0; l < weights.size(); ++l )
  {
    n += static_cast<std::size_t>( weights[l].size() + biases[l].size() );
  }
  return n;
}

// Order: per layer weight (column-major) then bias; head weight, head bias.
std::vector<double> PolicyParams::flatten() const
{
  std::vector<double> v;
  v.reserve( size() );
  auto push = [&v]( const auto& m ) { v.insert( v.end(), m.data(), m.data() + m.size() ); };
  for ( std::size_t l = 0; l < weights.size(); ++l )
  {
    push( weights[l] );
    push( biases[l] );
  }
  push( head_weight );
  push( head_bias );
  return v;
}

void PolicyParams::assign( std::span<const double> values )
{
  if ( values.size() != size() )
  {
    throw std::invalid_argument( "parameter vector has " + std::to_string( values.size() ) + " entries, expected " + std::to_string( size() ) );
  }
  std::size_t at = 0;
  auto pull = [&]( auto& m ) {
    std::copy_n( values.data() + at, m.size(), m.data() );
    at += static_cast<std::size_t>( m.size() );
  };
  for ( std::size_t l = 0; l < weights.size(); ++l )
  {
    pull( weights[l] );
    pull( biases[l] );
  }
  pull( head_weight );
  pull( head_bias );
}

void PolicyParams::axpy( double alpha, const PolicyParams& other )
{
  for ( std::size_t l = 0; l < weights.size(); ++l )
  {
    weights[l] += alpha * other.weights[l];
    biases[l] += alpha * other.biases[l];
  }
  head_weight += alpha * other.head_weight;
  head_bias += alpha * other.head_bias;
}

void PolicyParams::set_zero()
{
  for ( std::size_t l = 0; l < weights.size(); ++l )
  {
    weights[l].setZero();
    biases[l].setZero();
  }
  head_weight.setZero();
  head_bias.setZero();
}

bool PolicyParams::operator==( const PolicyParams& other ) const
{
  return hp == other.hp && flatten() == other.flatten();
}

double ActionDistribution::log_prob( OmegaAction a ) const
{
  return std::log( probability( a ) );
}

OmegaAction ActionDistribution::argmax() const
{
  const auto it = std::max_element( probabilities.begin(), probabilities.end() );
  return static_cast<OmegaAction>( it - probabilities.begin() );
}

ForwardTrace forward_trace( const PolicyParams& params, const Neighborhood& view )
{
  const auto layers = params.hp.layers;
  ForwardTrace t;
  t.view = view;
  t.activations.push_back( base_features( t.view ) );
  for ( std::uint32_t l = 0; l < layers; ++l )
  {
    const auto active = t.view.prefix( layers - l - 1 );
    t.messages.push_back( build_messages( t.view, t.activations.back(), active ) );
    Eigen::MatrixXd z = params.weights[l] * t.messages.back();
    z.colwise() += params.biases[l];
    t.activations.push_back( z.cwiseMax( 0.0 ) );
    t.preactivations.push_back( std::move( z ) );
  }
  t.logits = params.head_weight * t.activations.back().col( 0 ) + params.head_bias;
  const double top = t.logits.maxCoeff();
  double total = 0.0;
  for ( std::size_t a = 0; a < kActionCount; ++a )
  {
    t.distribution.probabilities[a] = std::exp( t.logits( static_cast<Eigen::Index>( a ) ) - top );
    total += t.distribution.probabilities[a];
  }
  for ( auto& p : t.distribution.probabilities )
  {
    p /= total;
  }
  return t;
}

ForwardTrace forward_trace( const PolicyParams& params, const MigGraph& g, node_id center )
{
  if ( !g.is_majority( center ) )
  {
    throw std::invalid_argument( "forward: node " + std::to_string( center ) + " is not a live majority node" );
  }
  return forward_trace( params, extract_neighborhood( g, center, params.hp.layers ) );
}

ActionDistribution forward( const PolicyParams& params, const MigGraph& g, node_id center )
{
  return forward_trace( params, g, center ).distribution;
}

std::map<node_id, ActionDistribution> forward_all( const PolicyParams& params, const MigGraph& g )
{
  std::map<node_id, ActionDistribution> result;
  for ( const auto n : g.reachable_gates() )
  {
    result.emplace_hint( result.end(), n, forward( params, g, n ) );
  }
  return result;
}

void backward( const PolicyParams& params, const ForwardTrace& t, OmegaAction action, double scale, PolicyParams& grad )
{
  if ( scale == 0.0 )
  {
    return;
  }
  const auto layers = params.hp.layers;
  // d log softmax_a / d logit_k = [k == a] - p_k
  Eigen::VectorXd dlogits( static_cast<Eigen::Index>( kActionCount ) );
  for ( std::size_t k = 0; k < kActionCount; ++k )
  {
    dlogits( static_cast<Eigen::Index>( k ) ) = ( k == static_cast<std::size_t>( action ) ? 1.0 : 0.0 ) - t.distribution.probabilities[k];
  }
  dlogits *= scale;
  grad.head_weight += dlogits * t.activations.back().col( 0 ).transpose();
  grad.head_bias += dlogits;

  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero( params.hp.hidden, t.activations.back().cols() );
  dh.col( 0 ) = params.head_weight.transpose() * dlogits;

  for ( std::uint32_t l = layers; l-- > 0; )
  {
    const auto& z = t.preactivations[l];
    const Eigen::MatrixXd dz = dh.cwiseProduct( ( z.array() > 0.0 ).cast<double>().matrix() );
    grad.weights[l] += dz * t.messages[l].transpose();
    grad.biases[l] += dz.rowwise().sum();
    if ( l == 0 )
    {
      break;
    }
    const Eigen::MatrixXd dm = params.weights[l].transpose() * dz;
    const auto input = static_cast<Eigen::Index>( params.hp.hidden );
    const auto slot = input + 1;
    Eigen::MatrixXd dprev = Eigen::MatrixXd::Zero( input, t.activations[l].cols() );
    for ( Eigen::Index i = 0; i < dz.cols(); ++i )
    {
      const auto& view = t.view;
      for ( std::size_t p = 0; p < 3; ++p )
      {
        const auto& e = view.fanins[static_cast<std::size_t>( i )][p];
        if ( e.local >= 0 )
        {
          dprev.col( e.local ) += dm.block( static_cast<Eigen::Index>( p ) * slot, i, input, 1 );
        }
      }
      for ( std::size_t k = 0; k < 3; ++k )
      {
        for ( const auto& e : view.fanout_bins[static_cast<std::size_t>( i )][k] )
        {
          dprev.col( e.local ) += dm.block( static_cast<Eigen::Index>( 3 + k ) * slot, i, input, 1 );
        }
      }
    }
    dh = std::move( dprev );
  }
}

void backward( const PolicyParams& params, const MigGraph& g, node_id center, OmegaAction action, double scale, PolicyParams& grad )
{
  if ( scale == 0.0 )
  {
    return;
  }
  backward( params, forward_trace( params, g, center ), action, scale, grad );
}

double uniform01( std::mt19937_64& rng )
{
  return static_cast<double>( rng() >> 11 ) * 0x1.0p-53;
}

SampledActions sample_actions( const std::map<node_id, ActionDistribution>& distributions, std::mt19937_64& rng, SamplingMode mode )
{
  SampledActions out;
  for ( const auto& [n, dist] : distributions )
  {
    OmegaAction a = dist.argmax();
    if ( mode == SamplingMode::Stochastic )
    {
      const double u = uniform01( rng );
      double acc = 0.0;
      std::size_t k = 0;
      // last action with non-zero mass absorbs rounding at the top end
      std::size_t last = 0;
      for ( ; k < kActionCount; ++k )
      {
        if ( dist.probabilities[k] > 0.0 )
        {
          last = k;
        }
        acc += dist.probabilities[k];
        if ( u < acc && dist.probabilities[k] > 0.0 )
        {
          break;
        }
      }
      a = static_cast<OmegaAction>( k < kActionCount ? k : last );
    }
    out.actions.emplace_hint( out.actions.end(), n, a );
    out.log_probs.emplace_hint( out.log_probs.end(), n, dist.log_prob( a ) );
  }
  return out;
}

} // namespace migopt
