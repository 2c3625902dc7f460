#pragma once

#include "cccl/embed_client.hpp"
#include "cccl/embedding_store.hpp"
#include "cccl/error.hpp"
#include "cccl/inventory.hpp"
#include "cccl/pseudocorrection.hpp"
#include "cccl/report.hpp"
#include "cccl/similarity.hpp"
#include "cccl/stats.hpp"
#include "cccl/svg.hpp"
#include "cccl/text.hpp"
#include "cccl/types.hpp"
