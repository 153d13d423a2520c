#pragma once

#include "vetotalk/construct.hpp"
#include "vetotalk/error.hpp"
#include "vetotalk/io.hpp"
#include "vetotalk/lp.hpp"
#include "vetotalk/model.hpp"
#include "vetotalk/participation.hpp"
#include "vetotalk/rational.hpp"
#include "vetotalk/solve.hpp"
#include "vetotalk/three_types.hpp"
#include "vetotalk/threshold.hpp"
#include "vetotalk/verify.hpp"
