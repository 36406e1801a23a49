// outcome: value
function Dog() { this.barks = "woof" };
function Cat() { this.purrs = "meow" };
dog = new Dog();
cat = new Cat();
print(dog.barks);
print(cat.purrs);

function animalThing(obj) {
  if (obj instanceof Cat) { return obj.purrs }
  else if (obj instanceof Dog) { return obj.barks }
  else { return "unknown animal" } };

print(animalThing(dog));
print(animalThing(cat));
print(animalThing(4234));

Cat.prototype = Dog.prototype;
print(animalThing(cat));
print(animalThing(dog));
