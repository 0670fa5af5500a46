#pragma once

#include "wald/binomial.hpp"
#include "wald/csv.hpp"
#include "wald/decision_model.hpp"
#include "wald/experiment.hpp"
#include "wald/missing_data.hpp"
#include "wald/parallel.hpp"
#include "wald/predictors.hpp"
#include "wald/regret_engine.hpp"
#include "wald/rng.hpp"
#include "wald/state_space.hpp"
#include "wald/validation_compare.hpp"
