#pragma once

#include "mwdep/arith.hpp"
#include "mwdep/curves.hpp"
#include "mwdep/engine/detect.hpp"
#include "mwdep/engine/harness.hpp"
#include "mwdep/engine/membership.hpp"
#include "mwdep/engine/report.hpp"
#include "mwdep/engine/torus.hpp"
#include "mwdep/errors.hpp"
#include "mwdep/fields.hpp"
#include "mwdep/finite_group.hpp"
#include "mwdep/gaussian.hpp"
#include "mwdep/heights.hpp"
#include "mwdep/hnf.hpp"
#include "mwdep/io.hpp"
#include "mwdep/places.hpp"
