#!/usr/bin/env python3
"""Regenerate data/mini_corpus.jsonl.

The nine named recipes from the case studies carry their printed
per-100g vectors. The remaining recipes are assembled from the ingredient
table below, and their per-100g vector is the quantity-weighted mean of
their ingredients. Output is deterministic.
"""

import json
import random
import sys
from pathlib import Path

SCHEMA = ["fat", "protein", "salt", "saturates", "sugars"]

# per 100 g: fat, protein, salt, saturates, sugars
INGREDIENTS = {
    "lemon juice, raw": [0.24, 0.35, 0.0, 0.04, 2.52],
    "lime juice, raw": [0.07, 0.42, 0.0, 0.01, 1.69],
    "water, bottled, generic": [0.0, 0.0, 0.0, 0.0, 0.0],
    "sugars, granulated": [0.0, 0.0, 0.0, 0.0, 99.8],
    "sugars, brown": [0.0, 0.12, 0.07, 0.0, 97.02],
    "oil, olive, salad or cooking": [100.0, 0.0, 0.01, 13.81, 0.0],
    "oil, vegetable, canola": [100.0, 0.0, 0.0, 7.37, 0.0],
    "vinegar, red wine": [0.0, 0.04, 0.02, 0.0, 0.0],
    "vinegar, cider": [0.0, 0.0, 0.01, 0.0, 0.4],
    "mustard, prepared, yellow": [3.34, 3.74, 2.84, 0.21, 0.92],
    "salt, table": [0.0, 0.0, 96.9, 0.0, 0.0],
    "sauce, worcestershire": [0.0, 0.0, 2.6, 0.0, 10.0],
    "sauce, soy, shoyu": [0.1, 8.14, 14.3, 0.01, 0.4],
    "spices, paprika": [12.89, 14.14, 0.17, 2.14, 10.34],
    "spices, chili powder": [14.28, 13.46, 4.0, 2.46, 7.19],
    "spices, garlic powder": [0.73, 16.55, 0.15, 0.25, 2.43],
    "spices, onion powder": [1.04, 10.41, 0.19, 0.22, 6.63],
    "spices, pepper, red or cayenne": [17.27, 12.01, 0.08, 3.26, 10.34],
    "spices, pepper, black": [3.26, 10.39, 0.05, 1.39, 0.64],
    "spices, oregano, dried": [4.28, 9.0, 0.06, 1.55, 4.09],
    "spices, cumin seed": [22.27, 17.81, 0.42, 1.54, 2.25],
    "spices, cinnamon, ground": [1.24, 3.99, 0.03, 0.35, 2.17],
    "spices, nutmeg, ground": [36.31, 5.84, 0.04, 25.94, 28.49],
    "alcoholic beverage, tequila sunrise, canned": [0.1, 0.3, 0.15, 0.01, 11.0],
    "alcoholic beverage, distilled, gin, 90 proof": [0.0, 0.0, 0.0, 0.0, 0.0],
    "alcoholic beverage, distilled, vodka, 80 proof": [0.0, 0.0, 0.0, 0.0, 0.0],
    "alcoholic beverage, wine, table, red": [0.0, 0.07, 0.01, 0.0, 0.62],
    "cranberry juice, unsweetened": [0.13, 0.39, 0.01, 0.01, 12.1],
    "orange juice, raw": [0.2, 0.7, 0.0, 0.02, 8.4],
    "beans, snap, green, raw": [0.22, 1.83, 0.02, 0.05, 3.26],
    "beans, kidney, red, mature seeds, canned": [0.36, 5.22, 0.65, 0.05, 0.75],
    "beans, black, mature seeds, cooked": [0.54, 8.86, 0.0, 0.14, 0.32],
    "potatoes, raw, skin": [0.1, 2.57, 0.03, 0.03, 1.15],
    "potatoes, russet, flesh and skin, baked": [0.13, 2.63, 0.04, 0.03, 1.08],
    "apples, raw, with skin": [0.17, 0.26, 0.0, 0.03, 10.39],
    "cornstarch": [0.05, 0.26, 0.02, 0.01, 0.0],
    "wheat flour, white, all-purpose, enriched": [0.98, 10.33, 0.01, 0.16, 0.27],
    "wheat flour, whole-grain": [2.5, 13.21, 0.0, 0.43, 0.41],
    "butter, salted": [81.11, 0.85, 1.6, 51.37, 0.06],
    "butter, without salt": [81.11, 0.85, 0.03, 51.37, 0.06],
    "egg, whole, raw, fresh": [9.51, 12.56, 0.36, 3.13, 0.37],
    "milk, whole, 3.25% milkfat": [3.25, 3.15, 0.11, 1.87, 5.05],
    "milk, reduced fat, 2% milkfat": [1.98, 3.3, 0.12, 1.26, 5.06],
    "cheese, cheddar": [33.31, 22.87, 1.6, 18.87, 0.27],
    "cheese, parmesan, grated": [28.0, 35.75, 3.8, 15.37, 0.07],
    "cream, fluid, heavy whipping": [36.08, 2.84, 0.1, 23.03, 2.92],
    "chicken, broilers or fryers, breast, meat only, raw": [2.62, 22.5, 0.11, 0.56, 0.0],
    "beef, ground, 85% lean meat, raw": [15.0, 18.59, 0.17, 5.68, 0.0],
    "tomatoes, red, ripe, raw": [0.2, 0.88, 0.01, 0.03, 2.63],
    "tomato products, canned, sauce": [0.3, 1.2, 1.1, 0.04, 4.21],
    "onions, raw": [0.1, 1.1, 0.01, 0.04, 4.24],
    "garlic, raw": [0.5, 6.36, 0.04, 0.09, 1.0],
    "peppers, sweet, red, raw": [0.3, 0.99, 0.01, 0.03, 4.2],
    "carrots, raw": [0.24, 0.93, 0.17, 0.04, 4.74],
    "celery, raw": [0.17, 0.69, 0.2, 0.04, 1.34],
    "rice, white, long-grain, regular, raw": [0.66, 7.13, 0.01, 0.18, 0.12],
    "pasta, dry, enriched": [1.51, 13.04, 0.01, 0.28, 2.67],
    "honey": [0.0, 0.3, 0.01, 0.0, 82.12],
    "syrups, maple": [0.06, 0.04, 0.02, 0.01, 60.46],
    "leavening agents, baking soda": [0.0, 0.0, 68.4, 0.0, 0.0],
    "leavening agents, baking powder, double-acting": [0.0, 0.0, 26.5, 0.0, 0.0],
    "vanilla extract": [0.06, 0.06, 0.02, 0.01, 12.65],
    "cocoa, dry powder, unsweetened": [13.7, 19.6, 0.05, 8.07, 1.75],
    "chocolate, dark, 70-85% cacao solids": [42.63, 7.79, 0.05, 24.49, 23.99],
    "bananas, raw": [0.33, 1.09, 0.0, 0.11, 12.23],
    "strawberries, raw": [0.3, 0.67, 0.0, 0.02, 4.89],
    "ice, frozen water": [0.0, 0.0, 0.0, 0.0, 0.0],
    "mint, fresh": [0.94, 3.75, 0.08, 0.25, 0.0],
    "basil, fresh": [0.64, 3.15, 0.01, 0.04, 0.3],
    "yogurt, greek, plain, nonfat": [0.39, 10.19, 0.09, 0.12, 3.24],
}

# The case-study recipes: printed per-100g vectors, printed ingredient lists.
CASE_RECIPES = [
    ("r001", "Easy Lemonade",
     ["lemon juice, raw", "water, bottled, generic", "sugars, granulated"],
     ["In a large pan, combine water and sugar", "Heat until the sugar just melts",
      "Remove from heat and pour into a pitcher", "Stir in lemon juice and chill"],
     [0.02, 0.03, 0.01, 0.0, 4.83]),
    ("r002", "Lemon Granita",
     ["water, bottled, generic", "sugars, granulated", "lemon juice, raw"],
     ["Pour the water and sugar into a small saucepan, and bring to a boil",
      "Boil until the sugar is completely dissolved", "Stir in lemon juice",
      "Freeze in a shallow dish, scraping with a fork every hour"],
     [0.03, 0.05, 0.01, 0.01, 15.45]),
    ("r003", "French Dressing",
     ["oil, olive, salad or cooking", "vinegar, red wine", "water, bottled, generic",
      "sugars, granulated", "mustard, prepared, yellow", "salt, table",
      "sauce, worcestershire", "spices, paprika"],
     ["Combine all ingredients in a jar", "Shake well until blended",
      "Chill before serving"],
     [6.03, 0.08, 0.19, 0.83, 0.15]),
    ("r004", "The Texican Cocktail",
     ["alcoholic beverage, tequila sunrise, canned", "cranberry juice, unsweetened",
      "lime juice, raw"],
     ["In a cocktail shaker with ice, shake all ingredients",
      "Strain into a chilled glass"],
     [0.12, 0.36, 0.06, 0.01, 7.22]),
    ("r005", "Bean Jam (Anko)",
     ["beans, snap, green, raw", "sugars, granulated", "salt, table"],
     ["Wash the beans, put them in a pressure cooker pot (or just a pot), then pour in water until they are covered",
      "Cook until soft", "Add sugar and salt and mash into a paste"],
     [0.12, 1.02, 0.09, 0.03, 46.13]),
    ("r006", "Metropolitan Martini",
     ["alcoholic beverage, distilled, gin, 90 proof", "cranberry juice, unsweetened",
      "lime juice, raw"],
     ["In a cocktail shaker filled halfway with ice combine all ingredients and shake well",
      "Strain mixture into a chilled martini glass"],
     [0.07, 0.23, 0.01, 0.01, 5.39]),
    ("r007", "Roasted Potatoes",
     ["potatoes, raw, skin", "oil, olive, salad or cooking", "salt, table"],
     ["Preheat oven to 400F",
      "Toss potatoes with oil and sea salt in a large baking pan, then arrange them in a single layer",
      "Roast until golden and tender"],
     [2.97, 2.48, 0.49, 0.42, 0.0]),
    ("r008", "Taco Seasoning",
     ["spices, chili powder", "spices, garlic powder", "spices, onion powder",
      "spices, pepper, red or cayenne", "spices, oregano, dried", "spices, paprika",
      "spices, cumin seed", "salt, table", "spices, pepper, black"],
     ["In a small bowl, mix together chili powder, garlic powder, onion powder, red pepper flakes, oregano, paprika, cumin, salt and pepper",
      "Store in an airtight container"],
     [6.74, 12.74, 4.06, 1.28, 6.19]),
    ("r009", "Freezer Apple Pie Filling - OAMC",
     ["apples, raw, with skin", "lemon juice, raw", "sugars, granulated", "cornstarch",
      "spices, cinnamon, ground", "spices, nutmeg, ground", "salt, table",
      "water, bottled, generic"],
     ["In a large bowl, toss apples with lemon juice and set aside",
      "Pour water into a Dutch oven over medium heat",
      "Mix in sugar, cornstarch, cinnamon, nutmeg and salt and bring to a boil",
      "Add apples and cook until tender", "Cool and freeze in containers"],
     [0.09, 0.13, 0.12, 0.02, 20.66]),
]

# name, ingredients, instruction steps
GENERATED = [
    ("Classic Vinaigrette",
     ["oil, olive, salad or cooking", "vinegar, red wine", "mustard, prepared, yellow",
      "salt, table", "spices, pepper, black"],
     ["Whisk vinegar, mustard, salt and pepper in a bowl", "Slowly whisk in the oil until emulsified"]),
    ("Cider Vinaigrette",
     ["oil, vegetable, canola", "vinegar, cider", "honey", "salt, table",
      "spices, pepper, black"],
     ["Combine all ingredients in a jar", "Shake well and season to taste"]),
    ("Limeade",
     ["lime juice, raw", "water, bottled, generic", "sugars, granulated"],
     ["Stir sugar into water until dissolved", "Add lime juice and serve over ice"]),
    ("Cranberry Spritzer",
     ["cranberry juice, unsweetened", "water, bottled, generic", "lime juice, raw",
      "ice, frozen water"],
     ["Fill a glass with ice", "Pour in cranberry juice and water", "Finish with a squeeze of lime"]),
    ("Vodka Cranberry",
     ["alcoholic beverage, distilled, vodka, 80 proof", "cranberry juice, unsweetened",
      "lime juice, raw"],
     ["In a cocktail shaker with ice, shake vodka and cranberry juice", "Strain into a glass and add lime"]),
    ("Gin Sour",
     ["alcoholic beverage, distilled, gin, 90 proof", "lemon juice, raw", "sugars, granulated",
      "ice, frozen water"],
     ["Shake gin, lemon juice and sugar with ice", "Strain into a chilled glass"]),
    ("Baked Potatoes",
     ["potatoes, russet, flesh and skin, baked", "butter, salted", "salt, table",
      "spices, pepper, black"],
     ["Preheat oven to 425F", "Pierce potatoes and bake for one hour",
      "Split open and top with butter, salt and pepper"]),
    ("Mashed Potatoes",
     ["potatoes, raw, skin", "butter, salted", "milk, whole, 3.25% milkfat", "salt, table"],
     ["Boil potatoes until tender", "Drain and mash with butter and warm milk", "Season with salt"]),
    ("Chili Con Carne",
     ["beef, ground, 85% lean meat, raw", "beans, kidney, red, mature seeds, canned",
      "tomato products, canned, sauce", "onions, raw", "spices, chili powder",
      "spices, cumin seed", "salt, table"],
     ["Brown the beef with onions in a large pot", "Stir in chili powder and cumin",
      "Add beans and tomato sauce and simmer for one hour"]),
    ("Black Bean Soup",
     ["beans, black, mature seeds, cooked", "onions, raw", "garlic, raw", "spices, cumin seed",
      "water, bottled, generic", "salt, table"],
     ["Saute onions and garlic until soft", "Add beans, cumin and water",
      "Simmer twenty minutes and blend until smooth"]),
    ("Green Bean Saute",
     ["beans, snap, green, raw", "oil, olive, salad or cooking", "garlic, raw", "salt, table"],
     ["Heat oil in a skillet", "Add green beans and garlic and cook until crisp tender",
      "Season with salt"]),
    ("Apple Crisp",
     ["apples, raw, with skin", "sugars, brown", "wheat flour, white, all-purpose, enriched",
      "butter, without salt", "spices, cinnamon, ground"],
     ["Preheat oven to 350F", "Place sliced apples in a baking dish",
      "Rub flour, brown sugar, butter and cinnamon together and scatter over the apples",
      "Bake until golden"]),
    ("Cinnamon Applesauce",
     ["apples, raw, with skin", "water, bottled, generic", "sugars, granulated",
      "spices, cinnamon, ground"],
     ["Cook apples with water until soft", "Mash with sugar and cinnamon"]),
    ("Pancakes",
     ["wheat flour, white, all-purpose, enriched", "milk, whole, 3.25% milkfat",
      "egg, whole, raw, fresh", "sugars, granulated",
      "leavening agents, baking powder, double-acting", "salt, table", "butter, salted"],
     ["In a large bowl, mix flour, sugar, baking powder and salt",
      "Whisk in milk, egg and melted butter", "Cook ladlefuls on a hot griddle until golden"]),
    ("Buttermilk Biscuits",
     ["wheat flour, white, all-purpose, enriched", "butter, without salt",
      "milk, reduced fat, 2% milkfat", "leavening agents, baking powder, double-acting",
      "leavening agents, baking soda", "salt, table"],
     ["Preheat oven to 450F", "Cut butter into the dry ingredients",
      "Stir in milk, pat out the dough and cut rounds", "Bake twelve minutes"]),
    ("Whole Wheat Bread",
     ["wheat flour, whole-grain", "water, bottled, generic", "honey", "salt, table",
      "oil, vegetable, canola"],
     ["Mix flour, water, honey, salt and oil into a dough", "Knead ten minutes and let rise",
      "Shape into a loaf and bake at 375F"]),
    ("Chocolate Brownies",
     ["chocolate, dark, 70-85% cacao solids", "butter, without salt", "sugars, granulated",
      "egg, whole, raw, fresh", "wheat flour, white, all-purpose, enriched",
      "cocoa, dry powder, unsweetened", "vanilla extract"],
     ["Preheat oven to 350F", "Melt chocolate with butter", "Beat in sugar, eggs and vanilla",
      "Fold in flour and cocoa and bake twenty five minutes"]),
    ("Hot Cocoa",
     ["milk, whole, 3.25% milkfat", "cocoa, dry powder, unsweetened", "sugars, granulated",
      "vanilla extract"],
     ["Warm milk in a saucepan", "Whisk in cocoa and sugar until smooth", "Stir in vanilla"]),
    ("Banana Smoothie",
     ["bananas, raw", "yogurt, greek, plain, nonfat", "milk, reduced fat, 2% milkfat", "honey",
      "ice, frozen water"],
     ["Combine all ingredients in a blender", "Blend until smooth"]),
    ("Strawberry Smoothie",
     ["strawberries, raw", "bananas, raw", "yogurt, greek, plain, nonfat",
      "orange juice, raw", "ice, frozen water"],
     ["Combine all ingredients in a blender", "Blend until smooth and serve cold"]),
    ("Strawberry Lemonade",
     ["strawberries, raw", "lemon juice, raw", "water, bottled, generic", "sugars, granulated"],
     ["Puree strawberries with sugar", "Stir in lemon juice and water and chill"]),
    ("Tomato Basil Pasta",
     ["pasta, dry, enriched", "tomatoes, red, ripe, raw", "basil, fresh",
      "oil, olive, salad or cooking", "garlic, raw", "cheese, parmesan, grated", "salt, table"],
     ["Cook pasta in salted water", "Saute garlic in oil and add chopped tomatoes",
      "Toss pasta with the sauce, basil and parmesan"]),
    ("Marinara Sauce",
     ["tomato products, canned, sauce", "onions, raw", "garlic, raw",
      "oil, olive, salad or cooking", "spices, oregano, dried", "basil, fresh", "salt, table"],
     ["Saute onions and garlic in oil", "Add tomato sauce and oregano",
      "Simmer thirty minutes and stir in basil"]),
    ("Macaroni and Cheese",
     ["pasta, dry, enriched", "cheese, cheddar", "milk, whole, 3.25% milkfat", "butter, salted",
      "wheat flour, white, all-purpose, enriched", "salt, table"],
     ["Cook pasta until tender", "Make a roux with butter and flour and whisk in milk",
      "Melt in cheddar and fold in the pasta"]),
    ("Chicken Stir Fry",
     ["chicken, broilers or fryers, breast, meat only, raw", "peppers, sweet, red, raw",
      "onions, raw", "sauce, soy, shoyu", "oil, vegetable, canola", "garlic, raw",
      "rice, white, long-grain, regular, raw"],
     ["Cook rice", "Stir fry chicken in hot oil until browned",
      "Add vegetables, garlic and soy sauce and cook until crisp", "Serve over rice"]),
    ("Chicken Soup",
     ["chicken, broilers or fryers, breast, meat only, raw", "carrots, raw", "celery, raw",
      "onions, raw", "water, bottled, generic", "salt, table", "spices, pepper, black"],
     ["Place everything in a large pot", "Simmer for one hour", "Shred the chicken and season"]),
    ("Fried Rice",
     ["rice, white, long-grain, regular, raw", "egg, whole, raw, fresh", "carrots, raw",
      "onions, raw", "sauce, soy, shoyu", "oil, vegetable, canola"],
     ["Cook rice and let it cool", "Scramble the egg in hot oil",
      "Add vegetables, rice and soy sauce and fry until hot"]),
    ("Beef Tacos",
     ["beef, ground, 85% lean meat, raw", "spices, chili powder", "spices, cumin seed",
      "spices, garlic powder", "onions, raw", "tomatoes, red, ripe, raw", "cheese, cheddar"],
     ["Brown beef with onion", "Stir in the spices and a splash of water",
      "Fill shells with beef, tomato and cheese"]),
    ("Cajun Spice Rub",
     ["spices, paprika", "spices, garlic powder", "spices, onion powder",
      "spices, pepper, red or cayenne", "spices, pepper, black", "spices, oregano, dried",
      "salt, table"],
     ["In a small bowl, mix together all the spices", "Store in an airtight jar"]),
    ("Pumpkin Pie Spice",
     ["spices, cinnamon, ground", "spices, nutmeg, ground", "spices, garlic powder"],
     ["Mix the spices together", "Store in a jar away from light"]),
    ("Honey Mustard Sauce",
     ["mustard, prepared, yellow", "honey", "vinegar, cider", "salt, table"],
     ["Whisk all ingredients together until smooth"]),
    ("Teriyaki Sauce",
     ["sauce, soy, shoyu", "sugars, brown", "water, bottled, generic", "garlic, raw",
      "cornstarch"],
     ["Combine soy sauce, sugar, water and garlic in a saucepan",
      "Bring to a simmer and thicken with cornstarch"]),
    ("Maple Glazed Carrots",
     ["carrots, raw", "syrups, maple", "butter, salted", "salt, table"],
     ["Boil carrots until tender", "Drain and toss with butter and maple syrup"]),
    ("Scrambled Eggs",
     ["egg, whole, raw, fresh", "milk, whole, 3.25% milkfat", "butter, salted", "salt, table"],
     ["Whisk eggs with milk and salt", "Cook in butter over low heat, stirring gently"]),
    ("Whipped Cream",
     ["cream, fluid, heavy whipping", "sugars, granulated", "vanilla extract"],
     ["Beat cream with sugar and vanilla until soft peaks form"]),
    ("Mint Julep",
     ["mint, fresh", "sugars, granulated", "water, bottled, generic", "ice, frozen water",
      "alcoholic beverage, distilled, vodka, 80 proof"],
     ["Muddle mint with sugar and water", "Fill with crushed ice and pour in the spirit"]),
    ("Sangria",
     ["alcoholic beverage, wine, table, red", "orange juice, raw", "apples, raw, with skin",
      "sugars, granulated", "lemon juice, raw"],
     ["Combine wine, juice and sugar in a pitcher", "Add sliced fruit and chill overnight"]),
    ("Lemon Bars",
     ["wheat flour, white, all-purpose, enriched", "butter, without salt", "sugars, granulated",
      "egg, whole, raw, fresh", "lemon juice, raw"],
     ["Preheat oven to 350F", "Press flour, butter and sugar into a pan and bake",
      "Whisk eggs, sugar and lemon juice, pour over the crust and bake again"]),
    ("Caprese Salad",
     ["tomatoes, red, ripe, raw", "basil, fresh", "oil, olive, salad or cooking",
      "salt, table", "spices, pepper, black"],
     ["Slice the tomatoes", "Layer with basil", "Drizzle with oil and season"]),
    ("Celery Sticks with Cheese",
     ["celery, raw", "cheese, cheddar"],
     ["Cut celery into sticks", "Fill with softened cheese"]),
    ("Orange Creamsicle Shake",
     ["orange juice, raw", "milk, whole, 3.25% milkfat", "vanilla extract", "sugars, granulated",
      "ice, frozen water"],
     ["Combine all ingredients in a blender", "Blend until frothy"]),
]

QUANTITY_CHOICES = [5, 10, 15, 25, 50, 100, 150, 200, 250]


def weighted_vector(names, grams):
    total = sum(grams)
    out = [0.0] * len(SCHEMA)
    for name, g in zip(names, grams):
        for k, v in enumerate(INGREDIENTS[name]):
            out[k] += v * g / total
    return [round(v, 2) for v in out]


def ingredient_record(name, grams):
    return {"descriptor": name, "nutrients": INGREDIENTS[name],
            "quantity": {"amount": grams, "unit": "g"}}


def build():
    rng = random.Random(20240607)
    records = []
    for rid, title, names, steps, vector in CASE_RECIPES:
        grams = [rng.choice(QUANTITY_CHOICES) for _ in names]
        records.append({"id": rid, "title": title,
                        "ingredients": [ingredient_record(n, g) for n, g in zip(names, grams)],
                        "instructions": steps, "nutrition_per_100g": vector})
    for offset, (title, names, steps) in enumerate(GENERATED):
        rid = "r%03d" % (len(CASE_RECIPES) + offset + 1)
        grams = [rng.choice(QUANTITY_CHOICES) for _ in names]
        records.append({"id": rid, "title": title,
                        "ingredients": [ingredient_record(n, g) for n, g in zip(names, grams)],
                        "instructions": steps,
                        "nutrition_per_100g": weighted_vector(names, grams)})
    return records


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).with_name("mini_corpus.jsonl")
    records = build()
    with out.open("w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps({"nutrient_schema": SCHEMA}) + "\n")
        for r in records:
            f.write(json.dumps(r) + "\n")
    print("%d recipes -> %s" % (len(records), out))


if __name__ == "__main__":
    main()
