#pragma once

#include "symcone/linalg.hpp"
#include "symcone/lp.hpp"
#include "symcone/group.hpp"
#include "symcone/cone.hpp"
#include "symcone/instances.hpp"
#include "symcone/parallel.hpp"
#include "symcone/adjacency.hpp"
#include "symcone/methods.hpp"
#include "symcone/io.hpp"
#include "symcone/cli.hpp"
