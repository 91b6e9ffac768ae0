#ifndef INFOCRIT_INFOCRIT_HPP
#define INFOCRIT_INFOCRIT_HPP

#include "infocrit/criteria.hpp"
#include "infocrit/csv.hpp"
#include "infocrit/datasets.hpp"
#include "infocrit/draws.hpp"
#include "infocrit/errors.hpp"
#include "infocrit/expectation.hpp"
#include "infocrit/loo.hpp"
#include "infocrit/models/balanced.hpp"
#include "infocrit/models/normal_mean.hpp"
#include "infocrit/models/regression.hpp"
#include "infocrit/models/schools.hpp"
#include "infocrit/normal_oracle.hpp"
#include "infocrit/parallel.hpp"
#include "infocrit/reproductions.hpp"
#include "infocrit/rng.hpp"

#endif  // INFOCRIT_INFOCRIT_HPP
