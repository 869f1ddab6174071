#pragma once

#include "fisplit/intlin.hpp"
#include "fisplit/group.hpp"
#include "fisplit/morphism.hpp"
#include "fisplit/subgroup.hpp"
#include "fisplit/category.hpp"
#include "fisplit/subobj.hpp"
#include "fisplit/preradical.hpp"
#include "fisplit/finite.hpp"
#include "fisplit/splitness.hpp"
#include "fisplit/harness.hpp"
