#pragma once

#include "rpr/bench.hpp"
#include "rpr/binary_codec.hpp"
#include "rpr/blob_store.hpp"
#include "rpr/call.hpp"
#include "rpr/catalog.hpp"
#include "rpr/category.hpp"
#include "rpr/checkpoint.hpp"
#include "rpr/digest.hpp"
#include "rpr/driver.hpp"
#include "rpr/errors.hpp"
#include "rpr/pruner.hpp"
#include "rpr/replay.hpp"
#include "rpr/text_codec.hpp"
#include "rpr/trace_log.hpp"
#include "rpr/translation_table.hpp"
#include "rpr/workload.hpp"
