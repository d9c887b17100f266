public class Category {
    private String name;

    public Category() {
    }

    public Category(String name) {
        this.name = name;
    }

    public void setName(String name) {
        this.name = name;
    }

    public String getName() {
        return name;
    }

    public boolean equals(Object other) {
        if (!(other instanceof Category)) {
            return false;
        }
        Category category = (Category) other;
        if (name == null) {
            return category.name == null;
        }
        return name.equals(category.name);
    }
}
