#pragma once

#include "monocrn/builtin.hpp"
#include "monocrn/cone_order.hpp"
#include "monocrn/convergence_lab.hpp"
#include "monocrn/crn_model.hpp"
#include "monocrn/extent_system.hpp"
#include "monocrn/linalg.hpp"
#include "monocrn/ode.hpp"
#include "monocrn/report.hpp"
#include "monocrn/sampling.hpp"
#include "monocrn/serialize.hpp"
#include "monocrn/types.hpp"
#include "monocrn/vector_field.hpp"
