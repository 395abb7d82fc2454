#pragma once

#include "fixpoint/space.hpp"
#include "fixpoint/expr.hpp"
#include "fixpoint/sampling.hpp"
#include "fixpoint/mapping.hpp"
#include "fixpoint/conditions.hpp"
#include "fixpoint/iterate.hpp"
#include "fixpoint/report.hpp"
#include "fixpoint/cli.hpp"
#include "fixpoint/demo.hpp"
