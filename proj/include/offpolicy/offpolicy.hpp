#ifndef OFFPOLICY_OFFPOLICY_HPP_
#define OFFPOLICY_OFFPOLICY_HPP_

#include "offpolicy/collision.hpp"
#include "offpolicy/counterexample.hpp"
#include "offpolicy/csv.hpp"
#include "offpolicy/errors.hpp"
#include "offpolicy/grid.hpp"
#include "offpolicy/harness.hpp"
#include "offpolicy/learners.hpp"
#include "offpolicy/random.hpp"
#include "offpolicy/report.hpp"
#include "offpolicy/sweep.hpp"
#include "offpolicy/value_error.hpp"
#include "offpolicy/verify.hpp"

#endif  // OFFPOLICY_OFFPOLICY_HPP_
