#pragma once

// Umbrella header.

#include "stgcn/autodiff.hpp"
#include "stgcn/checkpoint.hpp"
#include "stgcn/config.hpp"
#include "stgcn/dataset.hpp"
#include "stgcn/gradcheck.hpp"
#include "stgcn/layers.hpp"
#include "stgcn/partition.hpp"
#include "stgcn/rng.hpp"
#include "stgcn/tensor.hpp"
#include "stgcn/topology.hpp"
#include "stgcn/train.hpp"
