#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "migopt/mig_graph.hpp"
#include "migopt/neighborhood.hpp"
#include "migopt/rewrite.hpp"

namespace migopt
{

/// Network shape. `layers` is also the neighborhood depth, since L rounds
/// of message passing see exactly the depth-L neighborhood.
struct Hyperparams
{
  std::uint32_t layers = 3;
  std::uint32_t hidden = 16;

  bool operator==( const Hyperparams& ) const = default;
};

inline constexpr std::uint32_t kBaseFeatures = 4; ///< is_self, is_pi, is_const, is_majority
inline constexpr std::uint32_t kMessageSlots = 6; ///< 3 fanin slots, 3 fanout bins

/// Closed form: depends on (L, h) only.
std::size_t parameter_count( const Hyperparams& hp );

/*! \brief Weights of the L-layer port-binned GCN and the action head.
 *
 * Layer l maps a 6 * (h_in + 1) message to h features; h_in is 4 for the
 * first layer and h afterwards. The head maps the center's last feature
 * vector to 9 logits. Also used as the gradient buffer.
 */
struct PolicyParams
{
  Hyperparams hp;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  Eigen::MatrixXd head_weight;
  Eigen::VectorXd head_bias;

  static PolicyParams zeros( const Hyperparams& hp );
  /// Weights uniform in +-1/sqrt(fan_in), biases zero.
  static PolicyParams initialize( const Hyperparams& hp, std::uint64_t seed );

  std::size_t size() const;
  std::vector<double> flatten() const;
  void assign( std::span<const double> values );
  /// this += alpha * other
  void axpy( double alpha, const PolicyParams& other );
  void set_zero();

  bool operator==( const PolicyParams& other ) const;
};

struct ActionDistribution
{
  std::array<double, kActionCount> probabilities{};

  double probability( OmegaAction a ) const { return probabilities[static_cast<std::size_t>( a )]; }
  double log_prob( OmegaAction a ) const;
  /// Highest probability, lowest index on ties.
  OmegaAction argmax() const;
};

/// Activations of one forward pass, kept for the backward pass.
struct ForwardTrace
{
  Neighborhood view;
  std::vector<Eigen::MatrixXd> messages;       ///< per layer, message_dim x active nodes
  std::vector<Eigen::MatrixXd> preactivations; ///< per layer, h x active nodes
  std::vector<Eigen::MatrixXd> activations;    ///< [0] base features, then per layer
  Eigen::VectorXd logits;
  ActionDistribution distribution;
};

/// Throws std::invalid_argument when `center` is not a live majority node.
ForwardTrace forward_trace( const PolicyParams& params, const MigGraph& g, node_id center );
ForwardTrace forward_trace( const PolicyParams& params, const Neighborhood& view );

ActionDistribution forward( const PolicyParams& params, const MigGraph& g, node_id center );
/// Every reachable majority node.
std::map<node_id, ActionDistribution> forward_all( const PolicyParams& params, const MigGraph& g );

/// grad += scale * d/dparams log pi(action | state at center)
void backward( const PolicyParams& params, const ForwardTrace& trace, OmegaAction action, double scale, PolicyParams& grad );
void backward( const PolicyParams& params, const MigGraph& g, node_id center, OmegaAction action, double scale, PolicyParams& grad );

enum class SamplingMode : std::uint8_t
{
  Stochastic,
  Greedy
};

struct SampledActions
{
  ActionMap actions;
  std::map<node_id, double> log_probs;
};

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01( std::mt19937_64& rng );

/// Independent categorical draw per node, in ascending node order.
SampledActions sample_actions( const std::map<node_id, ActionDistribution>& distributions, std::mt19937_64& rng,
                               SamplingMode mode = SamplingMode::Stochastic );

} // namespace migopt
