#pragma once

#include "cdfs/dynamics.hpp"
#include "cdfs/encodings.hpp"
#include "cdfs/io.hpp"
#include "cdfs/linalg.hpp"
#include "cdfs/metrics.hpp"
#include "cdfs/qubit_space.hpp"
#include "cdfs/structure.hpp"
