#pragma once

// Umbrella header: the full pipeline surface.

#include "csei/aggregate.hpp"
#include "csei/analysis.hpp"
#include "csei/config.hpp"
#include "csei/csv.hpp"
#include "csei/date.hpp"
#include "csei/errors.hpp"
#include "csei/index.hpp"
#include "csei/ingest.hpp"
#include "csei/isolation_forest.hpp"
#include "csei/lexicon.hpp"
#include "csei/matrix.hpp"
#include "csei/outliers.hpp"
#include "csei/pca.hpp"
#include "csei/pipeline.hpp"
#include "csei/posts.hpp"
#include "csei/readability.hpp"
#include "csei/rng.hpp"
#include "csei/scoring.hpp"
#include "csei/sentiment.hpp"
#include "csei/stats.hpp"
#include "csei/svg.hpp"
#include "csei/text.hpp"
#include "csei/version.hpp"
