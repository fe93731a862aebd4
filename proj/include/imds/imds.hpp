#pragma once

#include "imds/analysis.hpp"
#include "imds/automata.hpp"
#include "imds/error.hpp"
#include "imds/graph.hpp"
#include "imds/lts.hpp"
#include "imds/model.hpp"
#include "imds/parser.hpp"
#include "imds/petri.hpp"
#include "imds/simulator.hpp"
#include "imds/views.hpp"
