#pragma once

#include "ggclf/benchmark.hpp"
#include "ggclf/chipclass.hpp"
#include "ggclf/common.hpp"
#include "ggclf/dataset.hpp"
#include "ggclf/evaluation.hpp"
#include "ggclf/gabriel_graph.hpp"
#include "ggclf/margin.hpp"
#include "ggclf/quality.hpp"
#include "ggclf/random.hpp"
#include "ggclf/serialize.hpp"
#include "ggclf/tuner.hpp"
