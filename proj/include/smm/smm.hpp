#pragma once

#include "smm/catastrophe.hpp"
#include "smm/compounds.hpp"
#include "smm/eigen.hpp"
#include "smm/error.hpp"
#include "smm/format.hpp"
#include "smm/matrix.hpp"
#include "smm/observables.hpp"
#include "smm/parallel.hpp"
#include "smm/semiclassical.hpp"
#include "smm/spin.hpp"
#include "smm/version.hpp"
