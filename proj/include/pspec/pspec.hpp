#pragma once

#include "pspec/error.hpp"
#include "pspec/index.hpp"
#include "pspec/smith.hpp"
#include "pspec/graph.hpp"
#include "pspec/graph_io.hpp"
#include "pspec/builtin.hpp"
#include "pspec/laurent.hpp"
#include "pspec/operators.hpp"
#include "pspec/bands.hpp"
#include "pspec/cycles.hpp"
#include "pspec/bounds.hpp"
#include "pspec/io.hpp"
