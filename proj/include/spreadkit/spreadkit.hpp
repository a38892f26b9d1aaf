#pragma once

#include "spreadkit/core/embedding.hpp"
#include "spreadkit/core/error.hpp"
#include "spreadkit/core/graph.hpp"
#include "spreadkit/core/io.hpp"
#include "spreadkit/core/objectives.hpp"
#include "spreadkit/core/rational.hpp"
#include "spreadkit/core/subset_sum.hpp"
#include "spreadkit/gen/generators.hpp"
#include "spreadkit/lambda/oracle.hpp"
#include "spreadkit/lambda/star.hpp"
#include "spreadkit/mve/branch_moments.hpp"
#include "spreadkit/mve/lift.hpp"
#include "spreadkit/mve/rounding.hpp"
#include "spreadkit/mve/tree_mve2.hpp"
#include "spreadkit/reductions/partition.hpp"
#include "spreadkit/spread/abs_oracle.hpp"
#include "spreadkit/spread/star.hpp"
#include "spreadkit/spread/tree_fptas.hpp"
#include "spreadkit/vexp/vertex_expansion.hpp"
