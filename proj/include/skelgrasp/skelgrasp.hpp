// SPDX-FileCopyrightText: 2026 skelgrasp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "skelgrasp/boundary.hpp"
#include "skelgrasp/cloud.hpp"
#include "skelgrasp/contour.hpp"
#include "skelgrasp/geometry.hpp"
#include "skelgrasp/image.hpp"
#include "skelgrasp/kdtree.hpp"
#include "skelgrasp/overlay.hpp"
#include "skelgrasp/pcd_io.hpp"
#include "skelgrasp/pipeline.hpp"
#include "skelgrasp/png_io.hpp"
#include "skelgrasp/scenegen.hpp"
#include "skelgrasp/segmentation.hpp"
#include "skelgrasp/selection.hpp"
#include "skelgrasp/serialization.hpp"
#include "skelgrasp/skeleton.hpp"
