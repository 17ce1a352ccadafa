#pragma once

#include "bounds.hpp"
#include "classical.hpp"
#include "critical.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "series.hpp"
#include "vie.hpp"
