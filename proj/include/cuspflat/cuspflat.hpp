#pragma once

#include "cuspflat/ahlfors.hpp"
#include "cuspflat/boundary.hpp"
#include "cuspflat/criticality.hpp"
#include "cuspflat/geometry.hpp"
#include "cuspflat/mapping.hpp"
#include "cuspflat/numerics.hpp"
#include "cuspflat/quadrature.hpp"
#include "cuspflat/rational.hpp"
#include "cuspflat/reflection.hpp"
#include "cuspflat/svg.hpp"
