#include "gof/presets.hpp"

#include <algorithm>
#include <cctype>

namespace gof {

namespace {

CalibrationConfig base_config(Family family, size_t sample_size,
                              Partition partition, PriorSpec prior) {
  CalibrationConfig cfg;
  cfg.trial.family = family;
  cfg.trial.sample_size = sample_size;
  cfg.trial.partition = std::move(partition);
  cfg.trial.estimator.family = family;
  cfg.prior = std::move(prior);
  cfg.trials = 1000000;
  cfg.seed = 42;
  return cfg;
}

std::vector<CasePreset> make_cases() {
  std::vector<CasePreset> cases;
  const ParamVector unit_rate = ParamVector::exponential_rate(1.0);
  const Partition equi3 = equiprobable_partition(Family::Exponential, unit_rate, 3);

  {
    CasePreset c;
    c.id = "A1";
    c.description =
        "exponential, fixed rate 1, N=10, three equiprobable cells";
    c.config = base_config(Family::Exponential, 10, equi3,
                           PriorSpec::fixed_at(unit_rate));
    c.reference = {1.35800,
                   2.0845822,
                   std::nullopt,
                   std::nullopt,
                   {1.801390, 3.052967, 4.146487, 6.279877},
                   std::nullopt};
    cases.push_back(std::move(c));
  }
  {
    CasePreset c;
    c.id = "A2";
    c.description =
        "exponential, fixed rate 1, N=1000, three equiprobable cells";
    c.config = base_config(Family::Exponential, 1000, equi3,
                           PriorSpec::fixed_at(unit_rate));
    c.reference = {1.350675,
                   2.245898,
                   std::nullopt,
                   std::nullopt,
                   {1.810692, 3.195782, 4.312670, 7.092106},
                   std::nullopt};
    cases.push_back(std::move(c));
  }
  const PriorSpec exp_box =
      PriorSpec::uniform_box(ParamVector{0.2}, ParamVector{2.0});
  {
    CasePreset c;
    c.id = "B";
    c.description =
        "exponential, rate uniform on [0.2,2], N=20, cells split at 0.5/1.5";
    c.config = base_config(Family::Exponential, 20, Partition({0.5, 1.5}),
                           exp_box);
    c.reference = {1.323495,
                   2.142576,
                   0.8175386,
                   0.617712,
                   {1.787257, 3.111514, 4.296282, 6.762272},
                   {{1.831157, 3.204561, 4.262158, 6.760412}}};
    cases.push_back(std::move(c));
  }
  {
    CasePreset c;
    c.id = "C";
    c.description =
        "exponential, rate uniform on [0.2,2], N=20, cells split at 1/2";
    c.config =
        base_config(Family::Exponential, 20, Partition({1.0, 2.0}), exp_box);
    c.reference = {1.294582,
                   2.183124,
                   0.7676803,
                   0.5929949,
                   {1.690018, 2.993245, 4.200237, 6.907514},
                   {{1.781864, 3.178560, 4.255779, 6.811008}}};
    cases.push_back(std::move(c));
  }
  {
    CasePreset c;
    c.id = "D";
    c.description =
        "exponential, rate uniform on [0.2,2], N=1000, cells split at 1/2";
    c.config =
        base_config(Family::Exponential, 1000, Partition({1.0, 2.0}), exp_box);
    c.reference = {1.281905,
                   2.191206,
                   0.7499429,
                   0.5850224,
                   {1.707008, 3.094988, 4.231155, 7.007469},
                   {{1.765294, 3.161543, 4.250052, 6.850396}}};
    cases.push_back(std::move(c));
  }
  const Partition normal4({-1.0, 0.0, 1.0});
  {
    CasePreset c;
    c.id = "E";
    c.description =
        "normal, (mu,sigma) uniform on [-0.5,0.5]x[1,2], N=1000, four cells";
    c.config = base_config(
        Family::Normal, 1000, normal4,
        PriorSpec::uniform_box(ParamVector{-0.5, 1.0}, ParamVector{0.5, 2.0}));
    c.reference = {1.772562,
                   2.852873,
                   1.101338,
                   0.621325,
                   {2.397755, 3.939819, 5.124125, 7.927041},
                   {{2.453660, 3.982921, 5.121967, 7.796123}}};
    cases.push_back(std::move(c));
  }
  {
    CasePreset c;
    c.id = "F";
    c.description =
        "normal, (mu,sigma) uniform on [-1,1]x[0.5,4], N=1000, four cells";
    c.config = base_config(
        Family::Normal, 1000, normal4,
        PriorSpec::uniform_box(ParamVector{-1.0, 0.5}, ParamVector{1.0, 4.0}));
    c.reference = {1.922529,
                   3.251841,
                   1.136623,
                   0.5912125,
                   {2.602056, 4.228039, 5.479738, 8.478611},
                   {{2.656888, 4.284709, 5.499895, 8.278232}}};
    cases.push_back(std::move(c));
  }
  return cases;
}

}  // namespace

const std::vector<CasePreset>& builtin_cases() {
  static const std::vector<CasePreset> cases = make_cases();
  return cases;
}

const CasePreset* find_case(std::string_view id) {
  std::string key(id);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  for (const auto& c : builtin_cases()) {
    if (c.id == key) {
      return &c;
    }
  }
  return nullptr;
}

}  // namespace gof
