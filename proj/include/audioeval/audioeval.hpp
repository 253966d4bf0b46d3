#pragma once

// Umbrella header.

#include "audioeval/audio.hpp"
#include "audioeval/client.hpp"
#include "audioeval/config.hpp"
#include "audioeval/dataset.hpp"
#include "audioeval/engine.hpp"
#include "audioeval/errors.hpp"
#include "audioeval/judge.hpp"
#include "audioeval/metrics.hpp"
#include "audioeval/mock_server.hpp"
#include "audioeval/report.hpp"
#include "audioeval/runner.hpp"
#include "audioeval/scheduler.hpp"
#include "audioeval/util.hpp"
