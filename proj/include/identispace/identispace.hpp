#pragma once

#include "identispace/geometry.hpp"
#include "identispace/integer_matrix.hpp"
#include "identispace/mesh.hpp"
#include "identispace/smith.hpp"
#include "identispace/stl.hpp"
#include "identispace/topology.hpp"
#include "identispace/wireframe.hpp"
