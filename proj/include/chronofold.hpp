#pragma once

#include "chronofold/causality.hpp"
#include "chronofold/costructures.hpp"
#include "chronofold/document.hpp"
#include "chronofold/dump.hpp"
#include "chronofold/error.hpp"
#include "chronofold/fuzz.hpp"
#include "chronofold/op.hpp"
#include "chronofold/oracle.hpp"
#include "chronofold/range_map.hpp"
#include "chronofold/rebase.hpp"
#include "chronofold/replica_log.hpp"
#include "chronofold/scenario.hpp"
#include "chronofold/sync.hpp"
#include "chronofold/timestamp.hpp"
#include "chronofold/utf8.hpp"
#include "chronofold/versions.hpp"
#include "chronofold/wire.hpp"
