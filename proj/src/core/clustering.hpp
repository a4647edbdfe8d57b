// SPDX-License-Identifier: Apache-2.0
//
// Angular user clustering and per-cluster successive-decoding order.

#pragma once

#include <unordered_map>
#include <vector>

#include "core/channel.hpp"

namespace beamnoma {

// Result of partitioning UEs into angular sectors.  Sector i (1-based) covers
// departure angles [-pi/2 + (i-1)*pi/S, -pi/2 + i*pi/S), half-open, with the
// top sector closed at +pi/2.  Empty sectors are dropped.
struct ClusterAssignment {
  int num_sectors = 0;                    // S
  std::vector<std::vector<int>> clusters; // UE ids, one list per non-empty sector
  std::vector<int> sector_of_cluster;     // 1-based sector index per cluster
};

// A cluster's fixed decoding order: strongest expected gain first.  A UE at
// position n (1-based) cancels everything after it and keeps interference
// from positions 1..n-1.
struct OrderedCluster {
  std::vector<int> ue_order;
  std::vector<double> ordering_gains;  // non-increasing along ue_order
};

// 1-based sector index for a departure angle; throws std::domain_error if the
// angle lies outside [-pi/2, pi/2].
int sector_index(double aod, int num_sectors);

// Partition UEs into non-empty angular sectors.
ClusterAssignment assign_clusters(const std::vector<UEProfile>& profiles, int num_sectors);

// Sort one cluster by descending ordering gain, ties broken by ascending UE
// id; throws std::invalid_argument if a member has no gain entry.
OrderedCluster sic_order(const std::vector<int>& cluster,
                         const std::unordered_map<int, double>& ordering_gains);

// A fully prepared problem instance: clustered and ordered UEs plus the
// transmit power budget.  Slots enumerate UEs as (cluster asc, position asc),
// which is the layout all solvers and rate evaluators use.
struct ClusteredScenario {
  std::vector<UEProfile> profiles;      // indexed by UE id
  ClusterAssignment assignment;
  std::vector<OrderedCluster> order;    // parallel to assignment.clusters
  double power_budget = 0.0;            // P_max in units of noise power
  int num_beams = 0;                    // N_t

  int num_ues() const { return static_cast<int>(profiles.size()); }
  int num_clusters() const { return static_cast<int>(assignment.clusters.size()); }
  int cluster_size(int m) const { return static_cast<int>(order[m].ue_order.size()); }

  // Flattened slot layout.
  std::vector<int> slot_ue;        // slot -> UE id
  std::vector<int> slot_cluster;   // slot -> cluster index (0-based)
  std::vector<int> slot_position;  // slot -> decoding position (0-based)
  std::vector<int> cluster_start;  // cluster -> first slot
  std::vector<int> ue_slot;        // UE id -> slot

  int num_slots() const { return static_cast<int>(slot_ue.size()); }
};

// Cluster by angle, order by expected gain (the sum of a UE's beam gains,
// a statistic that does not change between fading realizations), and record
// the power budget.  UE ids must be 0..K-1 and unique.
ClusteredScenario build_clustered_scenario(std::vector<UEProfile> profiles, int num_sectors,
                                           double power_budget, int num_beams);

}  // namespace beamnoma
