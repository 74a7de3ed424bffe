#pragma once

#include "momentcurve/core.hpp"
#include "momentcurve/errors.hpp"
#include "momentcurve/io.hpp"
#include "momentcurve/oracle.hpp"
#include "momentcurve/principal.hpp"
#include "momentcurve/pvmat.hpp"
#include "momentcurve/reduce.hpp"
#include "momentcurve/reduction.hpp"
#include "momentcurve/transform.hpp"
