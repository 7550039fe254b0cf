#pragma once

#include <memory>

#include "cbst/tree.hpp"

namespace cbst::detail {

std::unique_ptr<ConcurrentSet> make_seq_tree();
std::unique_ptr<ConcurrentSet> make_coarse_tree();
std::unique_ptr<ConcurrentSet> make_fn_tree();
std::unique_ptr<ConcurrentSet> make_fe_tree();
std::unique_ptr<ConcurrentSet> make_fem_tree();
std::unique_ptr<ConcurrentSet> make_tn_tree();

}  // namespace cbst::detail
