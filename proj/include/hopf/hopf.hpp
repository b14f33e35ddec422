#pragma once
// Umbrella header.

#include "hopf/types.hpp"
#include "hopf/error.hpp"
#include "hopf/parallel.hpp"
#include "hopf/geometry.hpp"
#include "hopf/fields.hpp"
#include "hopf/transverse.hpp"
#include "hopf/gauge.hpp"
#include "hopf/invariant.hpp"
#include "hopf/fibers.hpp"
#include "hopf/links.hpp"
#include "hopf/io.hpp"
#include "hopf/pipeline.hpp"
#include "hopf/fixtures.hpp"
#include "hopf/verify.hpp"
