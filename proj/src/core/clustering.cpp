// SPDX-License-Identifier: Apache-2.0

#include "core/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beamnoma {

namespace {
constexpr double kHalfPi = 0.5 * std::numbers::pi;
}

int sector_index(double aod, int num_sectors) {
  if (num_sectors < 1) throw std::invalid_argument("sector_index: num_sectors must be >= 1");
  if (!(aod >= -kHalfPi && aod <= kHalfPi))
    throw std::domain_error("sector_index: departure angle " + std::to_string(aod) +
                            " outside [-pi/2, pi/2]");
  const double width = std::numbers::pi / static_cast<double>(num_sectors);
  const int i = 1 + static_cast<int>(std::floor((aod + kHalfPi) / width));
  return std::min(i, num_sectors);  // +pi/2 belongs to the top sector
}

ClusterAssignment assign_clusters(const std::vector<UEProfile>& profiles, int num_sectors) {
  if (profiles.empty()) throw std::invalid_argument("assign_clusters: no profiles");
  if (num_sectors < 1)
    throw std::invalid_argument("assign_clusters: num_sectors must be >= 1");
  std::vector<std::vector<int>> by_sector(num_sectors);
  for (const UEProfile& p : profiles) by_sector[sector_index(p.aod, num_sectors) - 1].push_back(p.id);

  ClusterAssignment out;
  out.num_sectors = num_sectors;
  for (int s = 0; s < num_sectors; ++s) {
    if (by_sector[s].empty()) continue;
    out.clusters.push_back(std::move(by_sector[s]));
    out.sector_of_cluster.push_back(s + 1);
  }
  return out;
}

OrderedCluster sic_order(const std::vector<int>& cluster,
                         const std::unordered_map<int, double>& ordering_gains) {
  OrderedCluster out;
  out.ue_order = cluster;
  for (int id : cluster) {
    auto it = ordering_gains.find(id);
    if (it == ordering_gains.end())
      throw std::invalid_argument("sic_order: no ordering gain for UE " + std::to_string(id));
    if (!(it->second >= 0.0))
      throw std::invalid_argument("sic_order: ordering gain for UE " + std::to_string(id) +
                                  " must be >= 0");
  }
  std::sort(out.ue_order.begin(), out.ue_order.end(), [&](int a, int b) {
    const double ga = ordering_gains.at(a);
    const double gb = ordering_gains.at(b);
    if (ga != gb) return ga > gb;
    return a < b;
  });
  out.ordering_gains.reserve(out.ue_order.size());
  for (int id : out.ue_order) out.ordering_gains.push_back(ordering_gains.at(id));
  return out;
}

ClusteredScenario build_clustered_scenario(std::vector<UEProfile> profiles, int num_sectors,
                                           double power_budget, int num_beams) {
  if (!(power_budget > 0.0))
    throw std::invalid_argument("build_clustered_scenario: power_budget must be > 0");
  if (num_beams < 1)
    throw std::invalid_argument("build_clustered_scenario: num_beams must be >= 1");
  const int num_ues = static_cast<int>(profiles.size());
  std::vector<char> seen(num_ues, 0);
  for (const UEProfile& p : profiles) {
    if (p.id < 0 || p.id >= num_ues || seen[p.id])
      throw std::invalid_argument("build_clustered_scenario: UE ids must be unique 0..K-1");
    seen[p.id] = 1;
    if (p.beam_gains.n_elem != static_cast<arma::uword>(num_beams))
      throw std::invalid_argument("build_clustered_scenario: beam_gains length mismatch");
  }
  // Index profiles by id so slot lookups are direct.
  std::sort(profiles.begin(), profiles.end(),
            [](const UEProfile& a, const UEProfile& b) { return a.id < b.id; });

  ClusteredScenario sc;
  sc.assignment = assign_clusters(profiles, num_sectors);
  sc.power_budget = power_budget;
  sc.num_beams = num_beams;

  std::unordered_map<int, double> gains;
  gains.reserve(profiles.size());
  for (const UEProfile& p : profiles) gains.emplace(p.id, arma::accu(p.beam_gains));
  sc.profiles = std::move(profiles);

  sc.ue_slot.assign(num_ues, -1);
  for (size_t m = 0; m < sc.assignment.clusters.size(); ++m) {
    sc.order.push_back(sic_order(sc.assignment.clusters[m], gains));
    sc.cluster_start.push_back(static_cast<int>(sc.slot_ue.size()));
    const OrderedCluster& oc = sc.order.back();
    for (size_t n = 0; n < oc.ue_order.size(); ++n) {
      sc.ue_slot[oc.ue_order[n]] = static_cast<int>(sc.slot_ue.size());
      sc.slot_ue.push_back(oc.ue_order[n]);
      sc.slot_cluster.push_back(static_cast<int>(m));
      sc.slot_position.push_back(static_cast<int>(n));
    }
  }
  return sc;
}

}  // namespace beamnoma
