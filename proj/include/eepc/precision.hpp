#pragma once

// Extended-precision scalar used where double cannot resolve eighth-order
// errors (convergence studies against closed-form flows).

#ifdef EEPC_HAVE_FLOAT128
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

namespace eepc {
using QuadScalar = boost::multiprecision::float128;
}
#else
namespace eepc {
using QuadScalar = long double;
}
#endif
