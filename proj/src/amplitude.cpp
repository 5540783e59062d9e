#include "ribamp/amplitude.hpp"

#include <set>

namespace ribamp {
namespace detail {

AmplitudePlan build_plan(const AmplitudeRequest& req) {
  if (!req.graph || !req.faces || !req.assignment)
    throw MathError("BadRange", "amplitude request is missing graph data");
  const RibbonGraph& g = *req.graph;
  const FaceStructure& faces = *req.faces;
  const IndexAssignment& ia = *req.assignment;

  const int n = g.leg_count();
  if (static_cast<int>(req.external_indices.size()) != n)
    throw MathError("BadRange", "graph has " + std::to_string(n) + " legs but " +
                                    std::to_string(req.external_indices.size()) +
                                    " external indices were given");
  for (int idx : req.external_indices)
    if (idx < 0) throw MathError("BadRange", "negative external spectrum index");
  if (req.N < 1) throw MathError("BadRange", "cutoff N must be >= 1");
  if (req.i_R < 1 || req.i_R > req.N) throw MathError("BadRange", "need 1 <= i_R <= N");

  const std::vector<int> unbroken = faces.unbroken_labels();
  const std::set<int> unbroken_set(unbroken.begin(), unbroken.end());
  for (const auto& [label, idx] : req.fixed_labels) {
    if (!unbroken_set.count(label))
      throw MathError("NotUnbrokenFace",
                      "label " + std::to_string(label) + " is not an unbroken face");
    if (idx < 0) throw MathError("BadRange", "negative pinned spectrum index");
  }

  std::map<int, int> running_pos;  // label -> odometer position, ascending labels
  for (int label : unbroken)
    if (!req.fixed_labels.count(label)) {
      const int pos = static_cast<int>(running_pos.size());
      running_pos.emplace(label, pos);
    }

  AmplitudePlan plan;
  plan.running_count = static_cast<int>(running_pos.size());
  plan.lo = req.i_R;
  plan.hi = req.N;

  auto make_factor = [&](const std::vector<int>& labels_tuple) {
    FactorPlan f;
    f.slots.reserve(labels_tuple.size());
    for (std::size_t i = 0; i < labels_tuple.size(); ++i) {
      const int label = labels_tuple[i];
      if (label >= 1 && label <= n) {
        f.slots.push_back(req.external_indices[static_cast<std::size_t>(label - 1)]);
      } else if (auto it = req.fixed_labels.find(label); it != req.fixed_labels.end()) {
        f.slots.push_back(it->second);
      } else if (auto ft = faces.fixed_label_index.find(label);
                 ft != faces.fixed_label_index.end()) {
        f.slots.push_back(ft->second);
      } else if (auto rt = running_pos.find(label); rt != running_pos.end()) {
        f.slots.push_back(-1);
        f.patch.emplace_back(static_cast<int>(i), rt->second);
      } else {
        throw MathError("InternalAssertion", "segment label " + std::to_string(label) +
                                                 " resolved to no spectrum index");
      }
    }
    return f;
  };

  plan.numerators.reserve(ia.alpha.size());
  for (const auto& corners : ia.alpha) {
    if (corners.empty()) continue;  // dartless vertex contributes a unit factor
    if (corners.size() % 2 == 1) ++plan.odd_degree_vertices;
    plan.numerators.push_back(make_factor(corners));
  }
  plan.denominators.reserve(ia.beta.size());
  for (const auto& sides : ia.beta)
    plan.denominators.push_back(make_factor({sides[0], sides[1]}));

  const auto range = static_cast<std::uint64_t>(plan.hi - plan.lo + 1);
  std::uint64_t count = 1;
  for (int i = 0; i < plan.running_count; ++i) {
    if (count > (std::uint64_t{1} << 62) / range)
      throw BudgetError("CombinatorialBudgetExceeded",
                        "term count overflows the evaluation budget");
    count *= range;
  }
  plan.term_count = count;
  return plan;
}

}  // namespace detail
}  // namespace ribamp
