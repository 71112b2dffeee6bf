#include "support.hpp"

#include "repvote/oracle.hpp"

namespace repvote::test {

std::vector<ExactMetricSpace> invariant_suite(std::size_t random_count, std::size_t oracle_count) {
  std::vector<ExactMetricSpace> out;
  for (std::size_t k = 0; k < random_count; ++k) {
    const RandomMode mode = k % 2 ? RandomMode::IidUnitIntervalDistances : RandomMode::UniformBoxL2;
    out.push_back(to_exact(random_space(1000 + k, 2 + k % 19, mode)));
  }
  for (std::size_t k = 0; k < oracle_count; ++k) out.push_back(oracle_case(77, k).space);
  return out;
}

}  // namespace repvote::test
