#pragma once

#include "cmatch/agents.hpp"
#include "cmatch/aggregation.hpp"
#include "cmatch/axioms.hpp"
#include "cmatch/choice.hpp"
#include "cmatch/contract_set.hpp"
#include "cmatch/engine.hpp"
#include "cmatch/errors.hpp"
#include "cmatch/generators.hpp"
#include "cmatch/instance.hpp"
#include "cmatch/market.hpp"
#include "cmatch/oracle.hpp"
#include "cmatch/preference.hpp"
