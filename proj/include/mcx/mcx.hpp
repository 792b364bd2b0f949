#pragma once

#include "mcx/carnot.hpp"
#include "mcx/hodge.hpp"
#include "mcx/io.hpp"
#include "mcx/linear.hpp"
#include "mcx/multicomplex.hpp"
#include "mcx/oracle.hpp"
#include "mcx/random.hpp"
#include "mcx/report.hpp"
#include "mcx/rumin.hpp"
#include "mcx/spectral.hpp"
#include "mcx/star.hpp"
