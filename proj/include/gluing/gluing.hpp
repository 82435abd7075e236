#pragma once

#include "gluing/comparison.hpp"
#include "gluing/complex.hpp"
#include "gluing/geometry.hpp"
#include "gluing/glued_metric.hpp"
#include "gluing/link.hpp"
#include "gluing/parallel.hpp"
#include "gluing/report.hpp"
#include "gluing/scene.hpp"
#include "gluing/svg.hpp"
#include "gluing/validate.hpp"
#include "gluing/verifier.hpp"
