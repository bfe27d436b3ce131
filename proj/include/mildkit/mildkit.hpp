#pragma once

#include "mildkit/algebra.hpp"
#include "mildkit/errors.hpp"
#include "mildkit/freeness.hpp"
#include "mildkit/lie.hpp"
#include "mildkit/linalg.hpp"
#include "mildkit/magnus.hpp"
#include "mildkit/massey.hpp"
#include "mildkit/orders.hpp"
#include "mildkit/presentation.hpp"
