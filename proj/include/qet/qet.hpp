#pragma once

#include "qet/analytic.hpp"
#include "qet/encoding.hpp"
#include "qet/errors.hpp"
#include "qet/evt.hpp"
#include "qet/gqsp.hpp"
#include "qet/io.hpp"
#include "qet/linalg.hpp"
#include "qet/random.hpp"
#include "qet/regularize.hpp"
