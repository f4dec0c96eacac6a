#pragma once

#include "robinlab/audit.hpp"
#include "robinlab/errors.hpp"
#include "robinlab/fem.hpp"
#include "robinlab/geometry.hpp"
#include "robinlab/io.hpp"
#include "robinlab/mesh.hpp"
#include "robinlab/one_dim.hpp"
#include "robinlab/profile.hpp"
#include "robinlab/sweep.hpp"
