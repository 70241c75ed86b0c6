#pragma once

#include "xaibench/datasets/csv.hpp"
#include "xaibench/datasets/fetch.hpp"
#include "xaibench/datasets/manifest.hpp"
#include "xaibench/datasets/split.hpp"
#include "xaibench/datasets/standardize.hpp"
#include "xaibench/datasets/synthetic.hpp"
#include "xaibench/explainers/explainer.hpp"
#include "xaibench/harness/benchmark.hpp"
#include "xaibench/harness/cli.hpp"
#include "xaibench/metrics/agreement.hpp"
#include "xaibench/metrics/aggregate.hpp"
#include "xaibench/metrics/catalog.hpp"
#include "xaibench/metrics/fairness.hpp"
#include "xaibench/metrics/prediction_gap.hpp"
#include "xaibench/metrics/stability.hpp"
#include "xaibench/models/model.hpp"
#include "xaibench/models/serialize.hpp"
#include "xaibench/models/train.hpp"
