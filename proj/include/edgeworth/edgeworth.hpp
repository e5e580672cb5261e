#pragma once

#include "errors.hpp"
#include "specfun.hpp"
#include "quadrature.hpp"
#include "kernel.hpp"
#include "moments.hpp"
#include "bounds.hpp"
#include "inference.hpp"
#include "philox.hpp"
#include "oracle.hpp"
#include "io.hpp"
