#pragma once

#include "cms/entropy.hpp"
#include "cms/escape.hpp"
#include "cms/limits.hpp"
