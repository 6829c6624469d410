#pragma once

// Umbrella header: the whole library.

#include "slkd/common.hpp"
#include "slkd/rng.hpp"
#include "slkd/tensor.hpp"
#include "slkd/layers.hpp"
#include "slkd/model.hpp"
#include "slkd/optim.hpp"
#include "slkd/losses.hpp"
#include "slkd/dataset.hpp"
#include "slkd/bytes.hpp"
#include "slkd/idx.hpp"
#include "slkd/cifar.hpp"
#include "slkd/augment.hpp"
#include "slkd/batching.hpp"
#include "slkd/eval.hpp"
#include "slkd/curriculum.hpp"
#include "slkd/spec_json.hpp"
#include "slkd/checkpoint.hpp"
#include "slkd/config.hpp"
#include "slkd/trainer.hpp"
#include "slkd/report.hpp"
#include "slkd/svg_plot.hpp"
