#pragma once

#include "cms/cylinder_function.hpp"
#include "cms/metric.hpp"
#include "cms/orbit.hpp"
#include "cms/test_function.hpp"
