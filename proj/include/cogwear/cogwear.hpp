#pragma once

#include "cogwear/circadian.hpp"
#include "cogwear/circadian_summary.hpp"
#include "cogwear/core/feature_matrix_io.hpp"
#include "cogwear/features.hpp"
#include "cogwear/ingest.hpp"
#include "cogwear/learn/importance.hpp"
#include "cogwear/learn/model_io.hpp"
#include "cogwear/pipeline/cohort_summary.hpp"
#include "cogwear/pipeline/reports.hpp"
#include "cogwear/pipeline/study.hpp"
#include "cogwear/simlab.hpp"
#include "cogwear/sleepwake.hpp"
