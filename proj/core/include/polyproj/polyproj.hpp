#pragma once

#include "polyproj/core.hpp"
#include "polyproj/error.hpp"
#include "polyproj/gram.hpp"
#include "polyproj/instances.hpp"
#include "polyproj/latticial.hpp"
#include "polyproj/linalg.hpp"
#include "polyproj/lp_banach.hpp"
#include "polyproj/oracle.hpp"
#include "polyproj/projector.hpp"
