#pragma once

#include "ptdimer/bdg.hpp"
#include "ptdimer/dynamics.hpp"
#include "ptdimer/error.hpp"
#include "ptdimer/io.hpp"
#include "ptdimer/isospectral.hpp"
#include "ptdimer/linalg.hpp"
#include "ptdimer/model.hpp"
#include "ptdimer/stationary.hpp"
