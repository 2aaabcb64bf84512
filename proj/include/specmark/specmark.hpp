#pragma once

#include "specmark/attacks.hpp"
#include "specmark/bench.hpp"
#include "specmark/dct.hpp"
#include "specmark/dwt.hpp"
#include "specmark/error.hpp"
#include "specmark/grid.hpp"
#include "specmark/image.hpp"
#include "specmark/io.hpp"
#include "specmark/key_file.hpp"
#include "specmark/metrics.hpp"
#include "specmark/rng.hpp"
#include "specmark/svd.hpp"
#include "specmark/watermark.hpp"
#include "specmark/zigzag.hpp"
